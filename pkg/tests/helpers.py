"""Shared independent oracles for the test suite."""

import math

import numpy as np

from commonbath import chi_lowfreq


def gauss_legendre_phi(tau, f_k, params, n=400):
    """Independent route for Phi_k: fixed-order Gauss-Legendre quadrature of
    (hbar/pi) * int_0^infty chi''(omega) cosh[omega(|tau|-hbar beta/2)] /
    sinh(hbar omega beta/2) with the low-frequency chi''."""
    beta_hbar = params.hbar * params.beta
    nodes, weights = np.polynomial.legendre.leggauss(n)
    omega = 0.5 * params.Omega * (nodes + 1.0)
    w = 0.5 * params.Omega * weights
    a = abs(tau) - 0.5 * beta_hbar
    b = 0.5 * beta_hbar
    chi = chi_lowfreq(omega, f_k, params.Omega)
    num = np.exp(omega * (np.abs(a) - b)) + np.exp(-omega * (np.abs(a) + b))
    den = -np.expm1(-2.0 * omega * b)
    return params.hbar / math.pi * np.sum(w * chi * num / den)
