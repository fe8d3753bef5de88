"""Figure rendering: delay-vs-width curves and packet-density insets."""

from __future__ import annotations

import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .tables import SweepTable, TableError  # noqa: E402

LAW_STYLE = {
    "quadratic": {"color": "tab:blue", "marker": "o"},
    "linear": {"color": "tab:red", "marker": "s"},
}


def _width_axis(table: SweepTable) -> tuple[str, str]:
    """Column and axis label for the sweep width."""
    if "m_omega_dx" in table.columns:
        return "m_omega_dx", r"$m\,\Omega\,\Delta x$"
    return "dx", r"$\Delta x$"


def render_delay_figure(tables: list[SweepTable], out_path: str | Path,
                        asymptotes: list[float] | None = None) -> Path:
    """Log-x delay curves with dashed horizontal asymptote lines.

    One curve per dispersion-law group per table; the legend names the law.
    Without explicit asymptote values, each group's dashed line is taken from
    the table's own ``asymptote`` column at the broadest width.  Tables with
    no usable rows give blank axes plus a warning, not a failure.
    """
    if not tables:
        raise ValueError("at least one table is required")
    for table in tables:
        table.require("status", "dx", "delay")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    lines = [] if asymptotes is None else list(asymptotes)
    drew_any = False
    for table in tables:
        xcol, xlabel = _width_axis(table)
        for law, rows in sorted(table.grouped("dispersion").items()):
            x = table.column(xcol, rows)
            y = table.column("delay", rows)
            keep = x > 0
            if not keep.any():
                continue
            drew_any = True
            label = law if law else table.scenario
            style = LAW_STYLE.get(law, {})
            ax.semilogx(x[keep], y[keep], ms=3.5, lw=1.2, label=label, **style)
            if asymptotes is None and "asymptote" in table.columns:
                lines.append(float(table.column("asymptote", rows)[keep][-1]))
    for value in sorted(set(round(v, 12) for v in lines)):
        ax.axhline(value, ls="--", lw=1.0, color="0.4")
    if drew_any:
        ax.set_xlabel(xlabel)
        ax.legend(title="dispersion", frameon=False)
    else:
        warnings.warn("no usable rows; rendering blank axes", stacklevel=2)
    ax.set_ylabel("centre-of-mass delay")
    ax.set_title(" / ".join(sorted({t.scenario for t in tables})))
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_packet_inset(dump_path: str | Path, out_path: str | Path) -> Path:
    """Per-panel-normalized |psi|^2 curves from a wave-dump file.

    An ``density_initial`` column gives a two-panel initial/final figure;
    otherwise all density columns overlay on one axes (solid measured curve,
    dashed analytic limit when present).
    """
    dump_path = Path(dump_path)
    if not dump_path.exists():
        raise FileNotFoundError(f"wave dump not found: {dump_path}")
    table = SweepTable.load(dump_path)
    if not table.is_wave_dump():
        raise TableError(f"{dump_path.name}: not a wave dump "
                         "(missing '# dump: waves' preamble line)")
    table.require("x")
    x = table.column("x")
    curves = {name: table.column(name) for name in table.columns if name != "x"}
    if not curves:
        raise TableError(f"{dump_path.name}: no density columns")

    def normalized(values: np.ndarray) -> np.ndarray:
        peak = values.max()
        return values / peak if peak > 0 else values

    if "density_initial" in curves:
        fig, axes = plt.subplots(1, 2, figsize=(7.0, 3.0))
        panels = [("density_initial", "initial"),
                  ("density_final", "final")]
        for axis, (name, title) in zip(axes, panels):
            values = normalized(curves[name])
            support = values > 1e-6
            axis.plot(x, values, lw=1.2)
            if support.sum() > 1:
                axis.set_xlim(x[support][0], x[support][-1])
            axis.set_title(title)
            axis.set_xlabel("x")
        axes[0].set_ylabel(r"$|\psi|^2$ (peak-normalized)")
    else:
        fig, axis = plt.subplots(figsize=(5.0, 3.2))
        support = np.zeros(x.shape, dtype=bool)
        for name, values in curves.items():
            values = normalized(values)
            support |= values > 1e-6
            style = {"ls": "--", "color": "0.3"} if name.endswith("limit") else {"lw": 1.4}
            axis.plot(x, values, label=name.replace("density_", ""), **style)
        if support.sum() > 1:
            axis.set_xlim(x[support][0], x[support][-1])
        axis.set_xlabel("x")
        axis.set_ylabel(r"$|\psi|^2$ (peak-normalized)")
        axis.legend(frameon=False)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
