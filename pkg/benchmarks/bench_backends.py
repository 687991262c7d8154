"""Time the numba kernels against their numpy fallbacks.

Kernel pairs are timed side by side in one process. The end-to-end pipelines
run once per backend: here with whatever backend is active, and again in a
child process started with GRAPHSMOOTH_DISABLE_NUMBA=1.

    python3 benchmarks/bench_backends.py --size 512 --repeat 5
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

import graphsmooth as gs
from graphsmooth import _jit, kernels
from graphsmooth.bench import NoiseSpec, add_noise, phantom

PIPELINES = {
    "bilateral pcg 6": ("bilateral", gs.AccelConfig("pcg", 3, 2)),
    "guided nesterov 23": ("guided", gs.AccelConfig("nesterov", 23)),
    "tv pcg 135": ("tv", gs.AccelConfig("pcg", 3, 45)),
    "tv repeated 300": ("tv", gs.AccelConfig("repeated", 300)),
}


def best_of(fn, repeat):
    fn()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(n):
    rng = np.random.default_rng(0)
    g = rng.random((n, n))
    v = rng.random((n, n))
    weights = kernels.bilateral_weights_numpy(g, 2, 1.0, 0.2)
    coeff = rng.random((n, n)) * 0.125
    return {
        "bilateral_weights": lambda k: k(g, 2, 1.0, 0.2),
        "stencil_apply": lambda k: k(weights, v, 2),
        "box_sum": lambda k: k(v, 2),
        "tv_apply_l": lambda k: k(coeff, v),
    }


def bench_kernels(n, repeat):
    rows = []
    for name, call in kernel_cases(n).items():
        t_np = best_of(lambda: call(getattr(kernels, f"{name}_numpy")), repeat)
        if _jit.HAVE_NUMBA:
            t_nb = best_of(lambda: call(getattr(kernels, f"{name}_numba")), repeat)
        else:
            t_nb = float("nan")
        rows.append((name, t_nb, t_np))
    return rows


def bench_pipelines(n):
    clean = phantom(n)
    noisy = add_noise(clean, NoiseSpec(seed=0))
    out = {}
    for label, (kind, config) in PIPELINES.items():
        filt = gs.make_filter(kind, clean.topology)
        gs.run(filt, noisy, gs.AccelConfig(config.kind, 2 if config.kind == "pcg" else 1))
        t0 = time.perf_counter()
        report = gs.run(filt, noisy, config, reference=clean)
        out[label] = {"seconds": time.perf_counter() - t0, "psnr": report.final_psnr}
    return out


def child_pipelines(n):
    env = dict(os.environ, GRAPHSMOOTH_DISABLE_NUMBA="1")
    cmd = [sys.executable, __file__, "--size", str(n), "--pipelines-only"]
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-pipelines", action="store_true")
    parser.add_argument("--pipelines-only", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.pipelines_only:
        print(json.dumps({"backend": gs.backend_name(), "pipelines": bench_pipelines(args.size)}))
        return

    print(f"backend in this process: {gs.backend_name()}, image {args.size}x{args.size}")
    print(f"\n{'kernel':<20}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, t_nb, t_np in bench_kernels(args.size, args.repeat):
        print(f"{name:<20}{t_nb * 1e3:>10.2f}{t_np * 1e3:>10.2f}{t_np / t_nb:>8.1f}x")

    if args.skip_pipelines:
        return
    here = bench_pipelines(args.size)
    other = child_pipelines(args.size)
    print(f"\n{'pipeline':<20}{gs.backend_name() + ' s':>10}{other['backend'] + ' s':>10}{'psnr':>9}{'diff':>9}")
    for label, res in here.items():
        alt = other["pipelines"][label]
        diff = abs(res["psnr"] - alt["psnr"])
        print(f"{label:<20}{res['seconds']:>10.2f}{alt['seconds']:>10.2f}{res['psnr']:>9.3f}{diff:>9.1e}")


if __name__ == "__main__":
    main()
