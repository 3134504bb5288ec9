"""File-based figure rendering for scan and sweep reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_scan_figure(rows, meta: dict, path: str) -> None:
    """Two panels: lowest two levels vs B, and W fidelity vs B."""
    b = [row.b_field for row in rows]
    e0 = [row.energy for row in rows]
    e1 = [row.energy + row.gap for row in rows]
    fid = [row.w_fidelity for row in rows]

    fig, (ax_e, ax_f) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 6.0))
    ax_e.plot(b, e0, label="E0", color="tab:blue")
    ax_e.plot(b, e1, label="E1", color="tab:orange", linestyle="--")
    ax_e.set_ylabel("energy")
    ax_e.legend(loc="best")
    ax_f.plot(b, fid, color="tab:green")
    ax_f.set_ylabel("W fidelity")
    ax_f.set_xlabel("transverse field B")
    ax_f.set_ylim(-0.05, 1.05)
    title = f"{meta.get('model', '?')} ring, N={meta.get('n_sites', '?')}"
    ax_e.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(times, fidelity, norm_error, meta: dict, path: str) -> None:
    """Fidelity trace of a field ramp, with the norm-drift diagnostic below."""
    fig, (ax_f, ax_n) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 6.0),
                                     height_ratios=[3, 1])
    ax_f.plot(times, fidelity, color="tab:blue")
    ax_f.set_ylabel("W fidelity")
    ax_f.set_ylim(-0.05, 1.05)
    ax_f.set_title(
        f"ramp {meta.get('b_from', '?')} -> {meta.get('b_to', '?')}, "
        f"T={meta.get('ramp_time', '?')}, N={meta.get('n_sites', '?')}"
    )
    positive = [(t, e) for t, e in zip(times, norm_error) if e > 0]
    if positive:
        ax_n.semilogy([t for t, _ in positive], [e for _, e in positive],
                      color="tab:red")
    else:
        ax_n.text(0.5, 0.5, "norm drift below float resolution",
                  transform=ax_n.transAxes, ha="center")
    ax_n.set_ylabel("|norm - 1|")
    ax_n.set_xlabel("time")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
