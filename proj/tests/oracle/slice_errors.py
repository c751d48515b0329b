#!/usr/bin/env python3
"""Reference: sup-norm error of the kernel-quantization
mixture approximation of a truncated standard Gaussian slice on Y=[-3,3].

Construction mirrored exactly:
  means on the m-point midpoint grid over Y, sigma = rho * (|Y|/m),
  raw weights = slice(mu_j), renormalized to the simplex,
  mixture(y) = sum_j w_j * N(y; mu_j, sigma),
  slice normalized by 512-point midpoint quadrature over Y.
"""
import numpy as np

YLO, YHI = -3.0, 3.0
VOL = YHI - YLO


def midgrid(N, lo=YLO, hi=YHI):
    return lo + (np.arange(N) + 0.5) * (hi - lo) / N


def slice_fn(scale=1.0, mean=0.0, norm_points=512):
    yn = midgrid(norm_points)
    raw = lambda y: np.exp(-((y - mean) ** 2) / (2.0 * scale * scale))
    Z = np.sum(raw(yn)) * (VOL / norm_points)
    return lambda y: raw(y) / Z


def approx_slice(slice_f, m, rho):
    h = VOL / m
    mu = midgrid(m)
    w = slice_f(mu)
    w = w / w.sum()
    sigma = rho * h
    def mix(y):
        t = (y[:, None] - mu[None, :]) / sigma
        return (np.exp(-0.5 * t * t) / (sigma * np.sqrt(2 * np.pi))) @ w
    return mix


if __name__ == "__main__":
    sl = slice_fn(scale=1.0)
    ys = midgrid(4096)
    fy = sl(ys)
    print("trunc std normal, gaussian kernel, rho=3, eval grid 4096")
    for m in (8, 16, 32, 64):
        mix = approx_slice(sl, m, 3.0)
        err = np.max(np.abs(fy - mix(ys)))
        print(f"  m={m:3d}  sup err = {err:.12g}")
    # uniform slice -> equal weights check
    su = lambda y: np.ones_like(y) / VOL
    h = VOL / 16
    w = su(midgrid(16)); w = w / w.sum()
    print("uniform weights all equal 1/m:", np.allclose(w, 1.0 / 16, atol=0, rtol=0))
