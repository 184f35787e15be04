"""Plain-text corpora and multi-system backtranslation pools.

Corpora are consumed pre-tokenized: UTF-8, one sentence per line, tokens
separated by ASCII spaces. Nothing here tokenizes, truecases or cleans text.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlignmentError, ConfigError, DataError

EMPTY_POLICIES = ("skip", "error", "keep")


@dataclass(frozen=True, slots=True)
class Sentence:
    """A tokenized line with its 0-based position in the source file."""

    tokens: tuple[str, ...]
    line_no: int = 0

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True, slots=True)
class CandidatePair:
    """One synthetic source sentence paired with the target it translates."""

    system: str
    target_idx: int
    source: Sentence
    target: Sentence


def parse_line(line: str, line_no: int = 0, lowercase: bool = False) -> Sentence:
    if lowercase:
        line = line.lower()
    tokens = tuple(sys.intern(t) for t in line.split(" ") if t)
    if len(line.split()) != len(tokens):
        raise DataError(f"line {line_no}: tokens must be separated by ASCII spaces only")
    return Sentence(tokens, line_no)


def load_corpus(
    path: str | os.PathLike,
    policy: str = "skip",
    lowercase: bool = False,
) -> list[Sentence]:
    """Read a pre-tokenized corpus.

    Args:
        path: UTF-8 text file, one sentence per line.
        policy: What to do with empty or whitespace-only lines. ``"skip"``
            drops them (line numbers of later lines are preserved),
            ``"error"`` raises :class:`DataError`, ``"keep"`` stores a
            zero-token sentence so positional alignment survives.
        lowercase: Lowercase every token on the way in.

    Raises:
        DataError: Invalid UTF-8, a token containing non-space whitespace,
            or an empty line under ``policy="error"``.
        OSError: The file cannot be read.
    """
    if policy not in EMPTY_POLICIES:
        raise ConfigError(f"unknown empty-line policy {policy!r}")
    sentences = []
    try:
        with open(path, encoding="utf-8", newline="\n") as f:
            for i, raw in enumerate(f):
                line = raw.rstrip("\n").rstrip("\r")
                if not line.strip():
                    if policy == "skip":
                        continue
                    if policy == "error":
                        raise DataError(f"{path}: empty line {i}")
                    sentences.append(Sentence((), i))
                    continue
                try:
                    sentences.append(parse_line(line, i, lowercase))
                except DataError as exc:
                    raise DataError(f"{path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: invalid UTF-8 ({exc.reason} at byte {exc.start})") from None
    return sentences


def write_corpus(path: str | os.PathLike, sentences: Iterable[Sentence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s in sentences:
            f.write(s.text + "\n")


@dataclass(frozen=True)
class PoolManifest:
    target: str
    systems: tuple[tuple[str, str], ...]

    @classmethod
    def from_dict(cls, data: Mapping, base_dir: str | os.PathLike = ".") -> PoolManifest:
        try:
            target = data["target"]
            systems = [(entry["name"], entry["source"]) for entry in data["systems"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed pool manifest: missing {exc}") from None
        if not systems:
            raise ConfigError("pool manifest lists no systems")
        seen = set()
        for name, _ in systems:
            if not isinstance(name, str) or not name:
                raise ConfigError(f"invalid system name {name!r}")
            if name in seen:
                raise ConfigError(f"duplicate system name {name!r} in pool manifest")
            seen.add(name)

        def resolve(p):
            return p if os.path.isabs(p) else os.path.join(base_dir, p)

        return cls(resolve(target), tuple((n, resolve(p)) for n, p in systems))

    @classmethod
    def read(cls, path: str | os.PathLike) -> PoolManifest:
        with open(path, encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data, os.path.dirname(os.path.abspath(path)))


@dataclass(frozen=True)
class MultiSourcePool:
    """A target-side corpus aligned line by line with one translation per system.

    Source sentences may be empty (the system produced nothing); such
    candidates stay in place to keep the alignment but can never be selected.
    """

    targets: tuple[Sentence, ...]
    sources: Mapping[str, tuple[Sentence, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.sources:
            raise DataError("a pool needs at least one system")
        for name, src in self.sources.items():
            if not name:
                raise DataError("system names must be non-empty")
            if len(src) != len(self.targets):
                raise AlignmentError(
                    f"system {name!r} has {len(src)} lines, target has {len(self.targets)}"
                )

    @property
    def systems(self) -> list[str]:
        return list(self.sources)

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def n_candidates(self) -> int:
        return len(self.targets) * len(self.sources)

    def candidates(self) -> Iterator[CandidatePair]:
        """Yield every (system, target) pair, target-major, systems by name."""
        names = sorted(self.sources)
        for i, tgt in enumerate(self.targets):
            for name in names:
                yield CandidatePair(name, i, self.sources[name][i], tgt)

    def candidate(self, system: str, target_idx: int) -> CandidatePair:
        return CandidatePair(
            system, target_idx, self.sources[system][target_idx], self.targets[target_idx]
        )


def load_pool(
    manifest: PoolManifest | Mapping | str | os.PathLike,
    lowercase: bool = False,
    threads: int = 1,
) -> MultiSourcePool:
    """Load the target file and every system's source file of a pool.

    Target lines must be non-empty; empty source lines are kept as
    zero-token sentences.

    Raises:
        AlignmentError: A file's line count differs from the target's. The
            message names the system, its file and both counts.
        ConfigError: Malformed manifest or duplicate system names.
    """
    if isinstance(manifest, Mapping):
        manifest = PoolManifest.from_dict(manifest)
    elif not isinstance(manifest, PoolManifest):
        manifest = PoolManifest.read(manifest)

    jobs = [(manifest.target, "error")] + [(p, "keep") for _, p in manifest.systems]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        loaded = list(ex.map(lambda job: load_corpus(job[0], job[1], lowercase), jobs))
    targets = loaded[0]
    sources = {}
    for (name, path), sents in zip(manifest.systems, loaded[1:]):
        if len(sents) != len(targets):
            raise AlignmentError(
                f"system {name!r} ({path}) has {len(sents)} lines, "
                f"target ({manifest.target}) has {len(targets)}"
            )
        sources[name] = tuple(sents)
    return MultiSourcePool(tuple(targets), sources)


def as_tokens(x: Sentence | Sequence[str] | str) -> tuple[str, ...]:
    """Accept a Sentence, a token sequence or a space-separated string."""
    if isinstance(x, Sentence):
        return x.tokens
    if isinstance(x, str):
        return tuple(t for t in x.split(" ") if t)
    return tuple(x)
