"""Compare the compiled and pure-numpy kernel backends.

The backend is fixed when eprbsim.kernels is imported, so each backend
is timed in its own subprocess; EPRBSIM_NO_NUMBA=1 selects the numpy
fallback.  Run from anywhere after installing the package:

    python3 benchmarks/kernel_bench.py
    python3 benchmarks/kernel_bench.py --n 2000000 --repeats 5
"""
import argparse
import json
import math
import os
import subprocess
import sys
import time

THETA = 3.0 * math.pi / 8.0


def best_of(fn, repeats: int) -> float:
    fn()  # warmup: jit compile, page in buffers
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def run_child(args) -> None:
    from eprbsim import kernels
    from eprbsim.sweep import RunConfig, sweep_theta

    origin = 0xDEADBEEF
    uniforms_s = best_of(lambda: kernels.fill_uniforms(origin, 0, args.n), args.repeats)
    u = kernels.fill_uniforms(origin, 0, args.n)

    phi = kernels.fill_uniforms(origin + 1, 0, args.n) * math.pi
    r = kernels.fill_uniforms(origin + 2, 0, args.n)
    rhat = kernels.fill_uniforms(origin + 3, 0, args.n)
    station_s = best_of(
        lambda: kernels.station_response(0.3, phi, r, rhat, 4.0, 0.5, 1.0),
        args.repeats,
    )

    cfg = RunConfig(n=args.point_n, theta_start=THETA, theta_end=THETA, theta_steps=1)
    point_s = best_of(lambda: sweep_theta(cfg), args.repeats)
    _, rows = sweep_theta(cfg)

    json.dump(
        {
            "backend": kernels.BACKEND,
            "uniforms_s": uniforms_s,
            "station_s": station_s,
            "point_s": point_s,
            "uniform_sum": float(u.sum()),
            "s_value": rows[0]["S"],
        },
        sys.stdout,
    )


def run_parent(args) -> None:
    results = {}
    for label, no_numba in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, EPRBSIM_NO_NUMBA=no_numba)
        cmd = [
            sys.executable, os.path.abspath(__file__), "--child",
            "--n", str(args.n), "--point-n", str(args.point_n),
            "--repeats", str(args.repeats),
        ]
        out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True)
        results[label] = json.loads(out.stdout)
        if results[label]["backend"] != label:
            raise RuntimeError(f"expected backend {label}, got {results[label]['backend']}")

    rows = [
        (f"fill_uniforms ({args.n:,})", "uniforms_s"),
        (f"station_response ({args.n:,})", "station_s"),
        (f"full sweep point ({args.point_n:,})", "point_s"),
    ]
    print(f"{'kernel':<32}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, key in rows:
        fast = results["numba"][key]
        slow = results["numpy"][key]
        print(f"{name:<32}{fast:>10.4f} s{slow:>10.4f} s{slow / fast:>9.1f}x")

    same_streams = results["numba"]["uniform_sum"] == results["numpy"]["uniform_sum"]
    print(f"uniform streams identical: {same_streams}")
    print(
        "S(3pi/8): numba={:.6f} numpy={:.6f}".format(
            results["numba"]["s_value"], results["numpy"]["s_value"]
        )
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=5_000_000,
                        help="samples per kernel timing (default 5e6)")
    parser.add_argument("--point-n", type=int, default=1_000_000,
                        help="trials for the full sweep point (default 1e6)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repeats, best is reported (default 3)")
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.child:
        run_child(args)
    else:
        run_parent(args)


if __name__ == "__main__":
    main()
