"""Benchmark the adaptive-filter hot loop: compiled kernel vs pure numpy.

Runs the same filtered-reference update over identical buffers through both
implementations, reports best-of-N wall time, throughput, and the numerical
agreement between the two.

Usage:
    python3 benchmarks/bench_anc.py [--samples N] [--filter-length L]
                                    [--repeats R] [--seed S]
"""
import argparse
import time

import numpy as np

from hushkit._kernels import adapt_chunk_numba, adapt_chunk_numpy, backend_name
from hushkit.signals import generate_broadband


def room_path(ntaps, delay, decay, freq, fs):
    k = np.arange(ntaps, dtype=float)
    taps = np.zeros(ntaps)
    kk = k[delay:] - delay
    taps[delay:] = np.exp(-kk / decay) * np.cos(2 * np.pi * freq * kk / fs)
    return taps / np.sqrt(np.sum(taps ** 2))


def make_buffers(n_samples, filter_length, seed, fs=8000.0):
    x = generate_broadband(seed, 50.0, 500.0, n_samples, fs).samples
    primary = room_path(32, 5, 7.0, 650.0, fs)
    secondary = room_path(32, 3, 5.0, 900.0, fs)
    d = np.convolve(x, primary)[:n_samples]
    xf = np.convolve(x, secondary)[:n_samples]
    return dict(x=x, xf=xf, d=d, sec=secondary,
                w0=np.zeros(filter_length), n=n_samples)


def run_once(kernel, buffers, mu=1e-3):
    n = buffers["n"]
    w = buffers["w0"].copy()
    y = np.zeros(n)
    e = np.zeros(n)
    start = time.perf_counter()
    kernel(buffers["x"], buffers["xf"], buffers["d"], buffers["sec"],
           w, y, e, 0, n, mu, 0.0, False, 1e-8)
    elapsed = time.perf_counter() - start
    return elapsed, e


def benchmark(kernel, buffers, repeats):
    run_once(kernel, buffers)  # warmup (and JIT compile where applicable)
    best, errors = min(
        (run_once(kernel, buffers) for _ in range(repeats)),
        key=lambda pair: pair[0])
    return best, errors


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=200_000,
                        help="signal length in samples (default 200000)")
    parser.add_argument("--filter-length", type=int, default=128,
                        help="adaptive filter taps (default 128)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repetitions; best is reported (default 5)")
    parser.add_argument("--seed", type=int, default=0,
                        help="noise generator seed (default 0)")
    args = parser.parse_args()

    buffers = make_buffers(args.samples, args.filter_length, args.seed)
    print(f"adaptive update over {args.samples} samples, "
          f"{args.filter_length} taps (best of {args.repeats}); "
          f"package backend: {backend_name()}")

    numpy_time, numpy_e = benchmark(adapt_chunk_numpy, buffers, args.repeats)
    print(f"  numpy : {numpy_time * 1e3:9.2f} ms  "
          f"({args.samples / numpy_time:12,.0f} samples/s)")

    if adapt_chunk_numba is None:
        print("  numba : unavailable (not installed)")
        return

    numba_time, numba_e = benchmark(adapt_chunk_numba, buffers, args.repeats)
    print(f"  numba : {numba_time * 1e3:9.2f} ms  "
          f"({args.samples / numba_time:12,.0f} samples/s)")
    print(f"  speedup: {numpy_time / numba_time:.1f}x")

    worst = float(np.max(np.abs(numpy_e - numba_e)))
    agree = np.allclose(numpy_e, numba_e, rtol=1e-9, atol=1e-12)
    print(f"  agreement: max |diff| = {worst:.3e} "
          f"({'ok' if agree else 'DISAGREE'})")
    if not agree:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
