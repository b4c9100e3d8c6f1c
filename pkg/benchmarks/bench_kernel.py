"""Compare the compiled and pure-Python evaluation kernels.

Two workloads: random formulas over random models (many small runs), and
the Nelson embedding sweep over all reflexive-transitive models with up to
three worlds (one large batch per model).

    python3 benchmarks/bench_kernel.py [--quick]
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from strategies import UNARY, nnf_nelson_sentences, random_formula  # noqa: E402
from qbk.kernel import available_backends, set_backend  # noqa: E402
from qbk.kernel.program import Program, compile_model  # noqa: E402
from qbk.nelson import derived_compiled, tau  # noqa: E402
from qbk.semantics import Bounds, random_model  # noqa: E402
from qbk.semantics.enumerate import iter_compiled  # noqa: E402
from qbk.syntax import Signature  # noqa: E402


def random_workload(n_models):
    rng = random.Random(0)
    prog = Program(UNARY)
    roots = [prog.add(random_formula(rng, 5, UNARY, ("x", "y"))) for _ in range(300)]
    models = [compile_model(random_model(UNARY, rng, Bounds(6, 3), "QBK"), prog.layout)
              for _ in range(n_models)]

    def run():
        for cm in models:
            prog.run(cm, roots, {"x": 0, "y": len(cm.individuals) - 1})
    return run


def sweep_workload(depth, limit):
    sig = Signature({"P": 1})
    sentences = nnf_nelson_sentences(depth)
    nprog, tprog = Program(sig), Program(sig)
    nroots = [nprog.add(f) for f in sentences]
    troots = [tprog.add(tau(f)) for f in sentences]
    models = []
    for k, cm in enumerate(iter_compiled(sig, Bounds(3, 2), "QBS4")):
        if k >= limit:
            break
        models.append((cm, derived_compiled(cm)))

    def run():
        for cm, d in models:
            nprog.run(d, nroots, nelson=True)
            tprog.run(cm, troots)
    return run


def timed(run, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        run()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python kernel is available")
    workloads = {
        "random formulas": random_workload(20 if args.quick else 100),
        "embedding sweep": sweep_workload(2 if args.quick else 3, 50 if args.quick else 300),
    }
    print(f"{'workload':<18}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for name, run in workloads.items():
        times = {}
        for b in backends:
            set_backend(b)
            times[b] = timed(run, 3)
        line = f"{name:<18}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
        if len(times) == 2:
            line += f"{times['python'] / times['cython']:>11.1f}x"
        print(line)
    set_backend("cython" if "cython" in backends else "python")
    return 0


if __name__ == "__main__":
    sys.exit(main())
