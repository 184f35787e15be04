"""Analysis artifacts for a selection: per-system bin counts, lengths, diversity.

Every writer emits deterministic text (fixed key order, fixed float
formatting) so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import MultiSourcePool, Sentence
from .diversity import mtld, ttr, yules_i
from .fda import SelectionResult

DEFAULT_BIN_SIZE = 100_000


@dataclass
class BinHistogram:
    """Per-system counts in consecutive rank bins.

    ``bins`` hold raw counts. If the last bin is partial, ``extrapolated``
    holds its counts scaled by ``bin_size / last_bin_size``; the raw counts
    are never replaced.
    """

    bin_size: int
    systems: list[str]
    bins: list[dict[str, int]] = field(default_factory=list)
    bin_mean_length: list[float] = field(default_factory=list)
    last_bin_size: int = 0
    extrapolated: dict[str, float] | None = None

    @property
    def last_bin_extrapolated(self) -> bool:
        return self.extrapolated is not None

    @property
    def extrapolation_factor(self) -> float:
        if not self.bins:
            return 1.0
        return self.bin_size / self.last_bin_size

    def totals(self) -> dict[str, int]:
        return {s: sum(b[s] for b in self.bins) for s in self.systems}

    def to_rows(self) -> list[list[str]]:
        rows = [["bin", "start_rank", "end_rank", "size", *self.systems, "mean_source_length"]]
        for i, b in enumerate(self.bins):
            start = i * self.bin_size + 1
            size = sum(b.values())
            rows.append(
                [str(i + 1), str(start), str(start + size - 1), str(size)]
                + [str(b[s]) for s in self.systems]
                + [f"{self.bin_mean_length[i]:.2f}"]
            )
        if self.extrapolated is not None:
            rows.append(
                [f"{len(self.bins)}*", "", "", str(self.bin_size)]
                + [f"{self.extrapolated[s]:.2f}" for s in self.systems]
                + [""]
            )
        return rows

    def to_json(self) -> dict:
        return {
            "bin_size": self.bin_size,
            "systems": self.systems,
            "bins": [[b[s] for s in self.systems] for b in self.bins],
            "bin_mean_source_length": [round(x, 4) for x in self.bin_mean_length],
            "last_bin_size": self.last_bin_size,
            "last_bin_extrapolated": self.last_bin_extrapolated,
            "extrapolation_factor": self.extrapolation_factor,
            "extrapolated_last_bin": (
                None if self.extrapolated is None
                else [round(self.extrapolated[s], 4) for s in self.systems]
            ),
        }


def selection_histogram(
    result: SelectionResult, bin_size: int = DEFAULT_BIN_SIZE
) -> BinHistogram:
    if bin_size < 1:
        raise ValueError("bin_size must be >= 1")
    systems = sorted(set(result.per_system_counts) | {r.pair.system for r in result.records})
    hist = BinHistogram(bin_size, systems)
    records = result.records
    for start in range(0, len(records), bin_size):
        chunk = records[start : start + bin_size]
        counts = dict.fromkeys(systems, 0)
        tokens = 0
        for r in chunk:
            counts[r.pair.system] += 1
            tokens += len(r.pair.source)
        hist.bins.append(counts)
        hist.bin_mean_length.append(tokens / len(chunk))
    if hist.bins:
        hist.last_bin_size = sum(hist.bins[-1].values())
        if hist.last_bin_size < bin_size:
            scale = bin_size / hist.last_bin_size
            hist.extrapolated = {s: c * scale for s, c in hist.bins[-1].items()}
    return hist


def length_table(corpora: Mapping[str, Sequence[Sentence]]) -> dict[str, float]:
    """Mean tokens per sentence for each labelled corpus, labels in input order."""
    out = {}
    for label, sents in corpora.items():
        if not sents:
            raise ValueError(f"corpus {label!r} is empty")
        out[label] = sum(len(s) for s in sents) / len(sents)
    return out


@dataclass(frozen=True)
class DiversityRow:
    label: str
    yules_i_x100: float | None
    mtld: float | None
    ttr_x100: float


def diversity_table(corpora: Mapping[str, Sequence[Sentence]]) -> list[DiversityRow]:
    """Yule's I x100, MTLD and TTR x100 per label; degenerate values are None."""
    rows = []
    for label, doc in corpora.items():
        y = yules_i(doc)
        rows.append(
            DiversityRow(label, None if math.isinf(y) else 100.0 * y, mtld(doc), 100.0 * ttr(doc))
        )
    return rows


def _fmt(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.2f}"


def _tsv(rows: Sequence[Sequence[str]]) -> str:
    return "".join("\t".join(r) + "\n" for r in rows)


def lengths_tsv(table: Mapping[str, float]) -> str:
    return _tsv([["corpus", "mean_length"]] + [[k, f"{v:.2f}"] for k, v in table.items()])


def diversity_tsv(rows: Sequence[DiversityRow]) -> str:
    return _tsv(
        [["corpus", "yules_i_x100", "mtld", "ttr_x100"]]
        + [[r.label, _fmt(r.yules_i_x100), _fmt(r.mtld), _fmt(r.ttr_x100)] for r in rows]
    )


def histogram_csv(hist: BinHistogram) -> str:
    """Long-format ``bin,system,raw,extrapolated`` rows for external plotting."""
    lines = ["bin,system,raw,extrapolated"]
    for i, b in enumerate(hist.bins):
        last = i == len(hist.bins) - 1 and hist.extrapolated is not None
        for s in hist.systems:
            ext = hist.extrapolated[s] if last else float(b[s])
            lines.append(f"{i + 1},{s},{b[s]},{ext:.2f}")
    return "\n".join(lines) + "\n"


def report_corpora(
    result: SelectionResult,
    pool: MultiSourcePool | None = None,
    devset: Sequence[Sentence] | None = None,
) -> dict[str, list[Sentence]]:
    """The corpora a report describes, in a fixed label order.

    Empty synthetic sentences are left out of the backtranslated corpora.
    """
    corpora = {}
    if pool is not None:
        for name in sorted(pool.sources):
            corpora[f"bt:{name}"] = [s for s in pool.sources[name] if len(s)]
        corpora["target"] = list(pool.targets)
    if result.records:
        corpora["selected:source"] = [r.pair.source for r in result.records if len(r.pair.source)]
        corpora["selected:target"] = [r.pair.target for r in result.records]
    if devset:
        corpora["devset"] = list(devset)
    return {k: v for k, v in corpora.items() if v}


def write_report(
    out_dir: str | os.PathLike,
    result: SelectionResult,
    pool: MultiSourcePool | None = None,
    devset: Sequence[Sentence] | None = None,
    bin_size: int = DEFAULT_BIN_SIZE,
) -> dict:
    """Write histogram.tsv, histogram.csv, lengths.tsv, diversity.tsv and report.json."""
    os.makedirs(out_dir, exist_ok=True)
    hist = selection_histogram(result, bin_size)
    corpora = report_corpora(result, pool, devset)
    lengths = length_table(corpora)
    div = diversity_table(corpora)

    files = {
        "histogram.tsv": _tsv(hist.to_rows()),
        "histogram.csv": histogram_csv(hist),
        "lengths.tsv": lengths_tsv(lengths),
        "diversity.tsv": diversity_tsv(div),
    }
    report = {
        "n_records": len(result.records),
        "per_system_counts": result.per_system_counts,
        "histogram": hist.to_json(),
        "lengths": {k: round(v, 4) for k, v in lengths.items()},
        "diversity": {
            r.label: {
                "yules_i_x100": None if r.yules_i_x100 is None else round(r.yules_i_x100, 4),
                "mtld": None if r.mtld is None else round(r.mtld, 4),
                "ttr_x100": round(r.ttr_x100, 4),
            }
            for r in div
        },
    }
    files["report.json"] = json.dumps(report, indent=2) + "\n"
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    return report
