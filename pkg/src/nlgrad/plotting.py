"""Figures written next to CSV reports.  Uses the non-interactive Agg backend."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def symbol_figure(t, phi, bound, path, eig_t=None, eig=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t, phi, lw=1.5, label=r"$\Phi(t)$")
    ax.axhline(bound, color="k", ls="--", lw=1, label="Fejér bound")
    if eig_t is not None:
        ax.plot(eig_t, eig, "o", ms=3, label="circulant eigenvalues")
    ax.set_xlim(0, np.pi)
    ax.set_xlabel("t")
    ax.legend(frameon=False)
    return _save(fig, path)


def ratio_figure(ratios, Lambda, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(ratios, bins=40, color="0.6")
    ax.axvline(Lambda, color="r", lw=1.5, label=rf"$\Lambda$ = {Lambda:.4g}")
    ax.set_xlabel(r"$F_\varepsilon / D$")
    ax.set_ylabel("trials")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    return _save(fig, path)


def loglog_figure(eps, series, path, ylabel=""):
    """``series`` maps a label to y-values aligned with ``eps``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        ax.loglog(eps, y, "o-", ms=4, label=label)
    ax.set_xlabel(r"$\varepsilon$")
    if ylabel:
        ax.set_ylabel(ylabel)
    ax.legend(frameon=False)
    return _save(fig, path)


def pair_figure(x, continuum, discrete, path):
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    ax0.plot(x, continuum, "-", label="continuum (quadrature)")
    ax0.plot(x, discrete, ".", ms=3, label="lattice, cell means")
    ax0.legend(frameon=False)
    ax1.semilogy(x, np.abs(np.asarray(continuum) - np.asarray(discrete)) + 1e-300)
    ax1.set_ylabel("|difference|")
    ax1.set_xlabel("x")
    return _save(fig, path)


def stencil_figure(index, series, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        ax.plot(index, y, ".-", ms=3, lw=0.8, label=label)
    ax.set_xlabel("k")
    ax.legend(frameon=False)
    return _save(fig, path)
