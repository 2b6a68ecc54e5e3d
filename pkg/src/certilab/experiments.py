"""Batch experiment runner: deterministic CSV/JSON/SVG emission for every
subsystem, driven by a single seed."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from . import arith, schemes
from .automata import (cert_to_nfa, determinize_lasso, lower_bound_oracle,
                       periodicity_falsifier)
from .certify import check_completeness, measured_width, soundness_sweep
from .topology import CYCLE, PATH, build_path
from .walks import build_cert_graph, scc_periods


class InvariantViolation(AssertionError):
    """An invariant asserted by an experiment failed while running it."""


class SpecError(ValueError):
    pass


@dataclass
class ExperimentSpec:
    kind: str
    params: dict = field(default_factory=dict)
    out: str = "."
    seed: int = 0

    KINDS = ("spectrum", "minsize", "periodicity", "enumerate", "soundness",
             "sequence", "landau")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise SpecError(f"unknown experiment kind {self.kind!r}")


def _catalog_scheme(name):
    for s in schemes.catalog():
        if s.name == name:
            return s
    raise SpecError(f"no scheme named {name!r}; try `certilab scheme list`")


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return str(path)


def _target_flags(name: str, n_max: int):
    name = name.lower()
    flags = [False] * (n_max + 1)
    if name in ("primorial", "primorials"):
        for a in arith.primorials_up_to(n_max):
            flags[a] = True
    elif name == "squares":
        i = 0
        while i * i <= n_max:
            flags[i * i] = True
            i += 1
    elif name.startswith("multiples:"):
        m = int(name.split(":", 1)[1])
        for x in range(0, n_max + 1, m):
            flags[x] = True
    elif name == "all":
        flags = [True] * (n_max + 1)
    else:
        raise SpecError(f"unknown target set {name!r}")
    return flags


def run_experiment(spec: ExperimentSpec):
    """Dispatch one experiment; returns the list of files written."""
    out = Path(spec.out)
    rng = random.Random(spec.seed)
    kind = spec.kind
    p = spec.params

    if kind == "spectrum":
        name = p.get("name", "mod[0 mod 3]")
        k = int(p.get("k", 2))
        s = _catalog_scheme(name)
        v = s.verifier(k)
        if s.klass == CYCLE:
            spec_w = scc_periods(build_cert_graph(v), n_max=int(p.get("N", 200)))
            return [_write(out / "spectrum.csv", spec_w.to_csv())]
        eps = determinize_lasso(cert_to_nfa(v))
        return [_write(out / "eps.json", eps.to_json() + "\n")]

    if kind == "minsize":
        name = p.get("name", "primorial-complement")
        n_max = int(p.get("N", 1000))
        s = _catalog_scheme(name)
        rows = ["n,in_property,accepted,width_used"]
        worst = 0.0
        for n in range(1, n_max + 1):
            t = build_path(n)
            if s.in_property(t):
                width = measured_width(s, t)
                ok = check_completeness(s, t)
                if not ok:
                    raise InvariantViolation(f"completeness failed at n={n}")
                rows.append(f"{n},1,{int(ok)},{width}")
                if n >= 4:
                    worst = max(worst, width / math.log2(math.log2(n)))
            else:
                rows.append(f"{n},0,,")
        files = [_write(out / "minsize.csv", "\n".join(rows) + "\n")]
        files.append(_write(out / "minsize_summary.json",
                            json.dumps({"scheme": name, "N": n_max,
                                        "width_over_loglog_max": round(worst, 6)}) + "\n"))
        return files

    if kind == "periodicity":
        target = p.get("target", "primorials")
        n_max = int(p.get("N", 10_000))
        fit = periodicity_falsifier(_target_flags(target, n_max))
        doc = {"target": target, "N": n_max,
               "fit": None if fit is None else {"T": fit[0], "p": fit[1]}}
        return [_write(out / "periodicity.json", json.dumps(doc) + "\n")]

    if kind == "enumerate":
        n_max = int(p.get("N", 100))
        k = int(p.get("k", 1))
        target = p.get("target", "multiples:3")
        flags = _target_flags(target, n_max)
        hit = lower_bound_oracle(flags, k)
        doc = {"target": target, "N": n_max, "k": k,
               "matched": hit is not None,
               "verifier": None if hit is None else hit.name}
        return [_write(out / "enumerate.json", json.dumps(doc) + "\n")]

    if kind == "soundness":
        name = p.get("name", "mod[0 mod 3]")
        k_max = int(p.get("kmax", 8))
        count = int(p.get("count", 10))
        s = _catalog_scheme(name)
        if s.negatives_gen is None:
            raise SpecError(f"{name} has no negative corpus generator")
        pairs = s.negatives_gen(rng, count)
        advice = {id(t): a for t, a in pairs}
        report = soundness_sweep(s, [t for t, _ in pairs], k_max,
                                 advice_fn=lambda t: advice[id(t)])
        files = [_write(out / "soundness.csv", report.to_csv())]
        if not report.sound:
            raise InvariantViolation(
                f"accepting assignment found on a negative instance of {name}")
        return files

    if kind == "sequence":
        fname = p.get("f", "half_log")
        count = int(p.get("count", 200))
        f = {"half_log": arith.half_log, "two_fifths_log": arith.two_fifths_log}.get(fname)
        if f is None:
            raise SpecError(f"unknown growth function {fname!r}")
        a = arith.build_sequence_a(f, count, source=fname)
        b = arith.build_sequence_b(f, count, source=fname)
        rows = ["i,a_i,b_i"]
        total = 0
        for i, (ai, bi) in enumerate(zip(a.terms, b.terms), start=1):
            total += ai
            lo, val, hi = math.log2(i), f(total), math.log2(i) + 1
            if not (lo <= val + 1e-9 and val <= hi + 1e-9):
                raise InvariantViolation(f"growth inequality failed at i={i}")
            rows.append(f"{i},{ai},{bi}")
        return [_write(out / "sequence.csv", "\n".join(rows) + "\n")]

    if kind == "landau":
        n_max = int(p.get("N", 200))
        rows = ["n,g"]
        prev = 0
        for n in range(1, n_max + 1):
            g = arith.landau(n)
            if g < prev:
                raise InvariantViolation(f"landau not monotone at n={n}")
            prev = g
            rows.append(f"{n},{g}")
        return [_write(out / "landau.csv", "\n".join(rows) + "\n")]

    raise SpecError(f"unhandled kind {kind!r}")


# -- deterministic SVG charts ----------------------------------------------------

def render_svg_chart(csv_text: str, columns, width=640, height=400, title=""):
    """Scatter/step chart of one or two numeric series against the first
    column; byte-deterministic output."""
    lines = [ln for ln in csv_text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        header, data = [], []
    else:
        header = lines[0].split(",")
        data = [ln.split(",") for ln in lines[1:]]
    for col in columns:
        if lines and col not in header:
            raise SpecError(f"column {col!r} not in CSV header {header}")
    series = []
    if lines and data:
        xi = header.index(columns[0])
        for col in columns[1:]:
            yi = header.index(col)
            pts = []
            for row in data:
                if row[xi] and row[yi]:
                    pts.append((float(row[xi]), float(row[yi])))
            series.append((col, pts))
    pad = 40
    allpts = [pt for _, pts in series for pt in pts]
    if allpts:
        xs = [x for x, _ in allpts]
        ys = [y for _, y in allpts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x1 = x0 + 1
        if y1 == y0:
            y1 = y0 + 1
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    colors = ("#1f77b4", "#d62728", "#2ca02c")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{width // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    parts.append(f'<text x="{pad}" y="{height - pad + 16}" font-size="10">{x0:g}</text>')
    parts.append(f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="end" font-size="10">{x1:g}</text>')
    parts.append(f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end" font-size="10">{y0:g}</text>')
    parts.append(f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{y1:g}</text>')
    for i, (name, pts) in enumerate(series):
        color = colors[i % len(colors)]
        for x, y in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="{color}"/>')
        parts.append(f'<text x="{width - pad}" y="{pad + 14 * i}" text-anchor="end" '
                     f'font-size="11" fill="{color}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
