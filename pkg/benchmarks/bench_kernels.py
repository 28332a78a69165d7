"""Compare the numba kernels with their numpy twins.

    python benchmarks/bench_kernels.py [--repeat N]

Both variants are imported from the same module, so the environment flag is
irrelevant here; the first numba call is excluded as compilation warm-up.
"""
import argparse
import timeit

import numpy as np

from cvpulse import gates, kernels


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    tdag = gates.SQISWAP.conj().T.copy()
    stack = np.stack([gates.de_power("Z", "X", t) for t in rng.uniform(-1, 1, 2000)])
    cases = {
        "layered_cost_grad k=2": (
            lambda f, x=rng.uniform(-3, 3, 18): f(x, gates.CV, tdag, 2),
            kernels.nb_layered_cost_grad, kernels.np_layered_cost_grad),
        "layered_cost_grad k=4": (
            lambda f, x=rng.uniform(-3, 3, 30): f(x, gates.CV, tdag, 4),
            kernels.nb_layered_cost_grad, kernels.np_layered_cost_grad),
        "batch_trace_fidelity N=2000": (
            lambda f: f(stack, gates.CX),
            kernels.nb_batch_trace_fidelity, kernels.np_batch_trace_fidelity),
    }
    print(f"{'kernel':30s} {'numba us':>10s} {'numpy us':>10s} {'speedup':>8s}")
    for name, (call, nb, npf) in cases.items():
        call(nb)  # compile
        t_nb = timeit.timeit(lambda: call(nb), number=args.repeat) / args.repeat * 1e6
        t_np = timeit.timeit(lambda: call(npf), number=args.repeat) / args.repeat * 1e6
        print(f"{name:30s} {t_nb:10.1f} {t_np:10.1f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
