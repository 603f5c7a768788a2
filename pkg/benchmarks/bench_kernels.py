"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times single field evaluations, batched evaluation, one Dormand-Prince step,
and whole trajectories (a 16x16 basin sweep) for each available backend.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from alcove_mcf import alcove_of, preset
from alcove_mcf.dynamics import FlowOptions, _finish, _Run, grid_seeds
from alcove_mcf.flowfield import full_system
from alcove_mcf.kernels import available_backends


def _basin(data, backend: str, grid_n: int) -> int:
    A = alcove_of(data)
    sys_ = full_system(data, backend)
    opts = FlowOptions(keep_samples=False)
    V = A.vertices_frame
    n = 0
    for y in grid_seeds(V.min(axis=0), V.max(axis=0), grid_n):
        x = A.to_ambient(y)
        if not A.classify(x).interior:
            continue
        run = _Run(sys_, opts)
        _finish(A, sys_, run, run.run(sys_.project(x)))
        n += 1
    return n


def bench(name: str, params: dict, repeat: int, grid_n: int) -> None:
    data = preset(name, params)
    A = alcove_of(data)
    rng = np.random.default_rng(0)
    X = A.sample_interior(rng, 1000, margin=0.05)
    print(f"\n{name} {params}  (rank {A.rank}, {len(data.roots)} roots)")
    print(f"{'kernel':<22}" + "".join(f"{b:>14}" for b in available_backends()) + f"{'speedup':>10}")
    rows: dict[str, list[float]] = {}
    for backend in available_backends():
        sys_ = full_system(data, backend)
        Z = np.array([sys_.project(x) for x in X])
        z = Z[0]
        k1 = sys_.field(z)
        cases = {
            "field (x1000)": lambda: [sys_.field(zz) for zz in Z],
            "field_many (1000)": lambda: sys_.field_many(Z),
            "jacobian (x1000)": lambda: [sys_.jacobian(zz) for zz in Z],
            "dopri step (x1000)": lambda: [sys_.step(z, 1e-3, k1, 1e-10, 1e-12) for _ in range(1000)],
            f"basin {grid_n}x{grid_n}": lambda: _basin(data, backend, grid_n),
        }
        for label, fn in cases.items():
            t = min(timeit.repeat(fn, number=1, repeat=repeat))
            rows.setdefault(label, []).append(t)
    for label, ts in rows.items():
        ratio = ts[-1] / ts[0] if len(ts) > 1 else 1.0
        print(f"{label:<22}" + "".join(f"{t * 1e3:>12.2f}ms" for t in ts) + f"{ratio:>9.1f}x")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--grid", type=int, default=16)
    args = ap.parse_args()
    print("backends:", ", ".join(available_backends()))
    for name, params in (("sp-isotropy", {"n": 3}), ("supq-isotropy", {"p": 2, "q": 5}),
                         ("so2p-hermann", {"p": 2}), ("sp-isotropy", {"n": 6})):
        bench(name, params, args.repeat, args.grid if name != "sp-isotropy" or params["n"] == 3 else 4)


if __name__ == "__main__":
    main()
