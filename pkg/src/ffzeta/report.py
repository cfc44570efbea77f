"""Statistic report rows and their CSV / JSON / SVG renderings.

CSV schema (fixed):
    q,n,stat,value_re,value_im,reference_re,reference_im,deviation,meta
JSON files carry one record per row with the same fields.  The figure
path renders empirical-vs-reference sequences with matplotlib and
writes static SVG next to the delimited output.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CSV_HEADER = ["q", "n", "stat", "value_re", "value_im",
              "reference_re", "reference_im", "deviation", "meta"]


@dataclass
class StatReport:
    q: int
    n: int
    stat: str
    value: complex
    reference: complex | None = None
    wall_time: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def deviation(self) -> float | None:
        if self.reference is None:
            return None
        return abs(self.value - self.reference)

    def row(self):
        ref = self.reference
        meta = dict(self.meta)
        meta["wall_time_s"] = round(self.wall_time, 3)
        return [self.q, self.n, self.stat,
                repr(self.value.real), repr(self.value.imag),
                "" if ref is None else repr(ref.real),
                "" if ref is None else repr(ref.imag),
                "" if ref is None else repr(self.deviation),
                json.dumps(meta, sort_keys=True)]

    def record(self):
        keys = CSV_HEADER
        return dict(zip(keys, self.row()))


def render_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def write_csv(reports, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(render_csv(reports))


def write_json(reports, path: str) -> None:
    with open(path, "w") as fh:
        json.dump([r.record() for r in reports], fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_csv(path: str):
    """Parse a report CSV; deviations are recomputed, not trusted."""
    out = []
    with open(path) as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        for row in rd:
            ref = None
            if row[5] != "":
                ref = complex(float(row[5]), float(row[6]))
            rep = StatReport(q=int(row[0]), n=int(row[1]), stat=row[2],
                             value=complex(float(row[3]), float(row[4])),
                             reference=ref, meta=json.loads(row[8]))
            out.append(rep)
    return out


def render_figure(reports, path: str, title: str | None = None) -> None:
    """Empirical vs reference across n, one panel per statistic tag."""
    stats = sorted({r.stat for r in reports})
    fig, axes = plt.subplots(len(stats), 1, figsize=(6.0, 3.0 * len(stats)),
                             squeeze=False)
    for ax, stat in zip(axes[:, 0], stats):
        rows = sorted((r for r in reports if r.stat == stat), key=lambda r: r.n)
        ns = [r.n for r in rows]
        ax.plot(ns, [r.value.real for r in rows], "o-", label="empirical")
        if all(r.reference is not None for r in rows):
            ax.plot(ns, [r.reference.real for r in rows], "s--", label="reference")
        ax.set_xlabel("n")
        ax.set_ylabel(stat)
        ax.legend(loc="best", fontsize=8)
        ax.grid(True, alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
