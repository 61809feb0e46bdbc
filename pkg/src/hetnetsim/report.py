"""Run outputs: delimited curve files, run manifests, rendered figures."""

import json

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CSV_HEADER = "delta_bps,psi_mean,psi_ci95,n_samples"


def write_curve_csv(path, curve):
    """Write one curve with a stable, round-trippable float format.

    The byte content is a pure function of the curve values, which is what
    makes run outputs comparable across worker counts and re-runs.
    """
    lines = [CSV_HEADER]
    for d, p, c in zip(curve.deltas, curve.psi, curve.ci_halfwidth):
        lines.append(f"{float(d)!r},{float(p)!r},{float(c)!r},"
                     f"{curve.n_samples}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def render_rate_figure(curves, path, title=None):
    """Plot one or more labeled curves with CI bands to an image file."""
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    for label, curve in curves.items():
        if curve is None:
            continue
        (line,) = ax.plot(curve.deltas, curve.psi, label=label, lw=1.6)
        ax.fill_between(curve.deltas,
                        curve.psi - curve.ci_halfwidth,
                        curve.psi + curve.ci_halfwidth,
                        color=line.get_color(), alpha=0.2, lw=0)
    ax.set_xscale("log")
    ax.set_xlabel("rate threshold (bit/s)")
    ax.set_ylabel("fraction of served users above threshold")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, which="both", ls=":", lw=0.5)
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
