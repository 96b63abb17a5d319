"""Translation Edit Rate with greedy block shifts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from wxtrans.errors import InvalidArgument
from wxtrans.metrics.config import MetricConfig
from wxtrans.metrics.edit import levenshtein, levenshtein_masks, match_masks
from wxtrans.metrics.tokenize import tokenize


@dataclass(frozen=True)
class TerStats:
    edits: int
    shifts: int
    ref_length: float

    @property
    def score(self) -> float:
        if self.ref_length == 0:
            return 100.0 if self.edits > 0 else 0.0
        return 100.0 * self.edits / self.ref_length


def _alignment(hyp: Sequence[str], ref: Sequence[str]) -> tuple[list[bool], list[bool], list[int]]:
    """Traceback of one optimal alignment.

    Returns exact-match flags for hyp and ref words, and for every ref index
    the hyp index it sits after (``-1`` for the sentence start).
    """
    n, m = len(hyp), len(ref)
    d = [list(range(m + 1))]
    for i in range(1, n + 1):
        prev = d[i - 1]
        hi = hyp[i - 1]
        left = i
        row = [i]
        for j in range(1, m + 1):
            best = prev[j - 1] if hi == ref[j - 1] else prev[j - 1] + 1
            up = prev[j] + 1
            if up < best:
                best = up
            if left + 1 < best:
                best = left + 1
            row.append(best)
            left = best
        d.append(row)

    hyp_ok = [False] * n
    ref_ok = [False] * m
    ref_pos = [0] * m
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and d[i][j] == d[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]):
            if hyp[i - 1] == ref[j - 1]:
                hyp_ok[i - 1] = ref_ok[j - 1] = True
            ref_pos[j - 1] = i - 1
            i, j = i - 1, j - 1
        elif i > 0 and d[i][j] == d[i - 1][j] + 1:
            i -= 1
        else:
            ref_pos[j - 1] = i - 1
            j -= 1
    return hyp_ok, ref_ok, ref_pos


def _ref_index(ref: list[str], max_size: int) -> dict[tuple, list[int]]:
    index: dict[tuple, list[int]] = {}
    for length in range(1, min(max_size, len(ref)) + 1):
        for j in range(len(ref) - length + 1):
            index.setdefault(tuple(ref[j : j + length]), []).append(j)
    return index


def _best_shift(hyp: list[str], ref: list[str], ref_index: dict, peq: dict, cur: int, cfg: MetricConfig):
    hyp_ok, ref_ok, ref_pos = _alignment(hyp, ref)
    seen: dict[tuple, int] = {}

    best = None
    best_key = None
    for i in range(len(hyp)):
        for length in range(1, cfg.ter_max_shift_size + 1):
            if i + length > len(hyp):
                break
            span = tuple(hyp[i : i + length])
            starts = ref_index.get(span)
            if not starts:
                break
            if all(hyp_ok[i : i + length]):
                continue
            for j in starts:
                if all(ref_ok[j : j + length]):
                    continue
                if i <= ref_pos[j] < i + length:
                    continue
                # after the hyp word aligned to each ref word from j-1 to j+length-1
                dests = {ref_pos[k] + 1 if k >= 0 else 0 for k in range(j - 1, j + length)}
                for dest in sorted(dests):
                    if i <= dest <= i + length:
                        continue
                    if abs(dest - i) > cfg.ter_max_shift_distance:
                        continue
                    rest = hyp[:i] + hyp[i + length :]
                    at = dest - length if dest > i else dest
                    moved = rest[:at] + list(span) + rest[at:]
                    key_moved = tuple(moved)
                    new = seen.get(key_moved)
                    if new is None:
                        new = seen[key_moved] = levenshtein_masks(peq, len(ref), moved)
                    # gains of one only break even but can open later shifts
                    if new >= cur:
                        continue
                    key = (cur - new, length, -i, -dest)
                    if best_key is None or key > best_key:
                        best, best_key = (moved, new), key
    return best


def _ter_single(hyp: list[str], ref: list[str], cfg: MetricConfig) -> tuple[int, int]:
    cur = levenshtein(hyp, ref)
    shifts = 0
    if cfg.ter_shifts_enabled:
        index = _ref_index(ref, cfg.ter_max_shift_size)
        peq = match_masks(ref)
        while cur > 0 and shifts < cfg.ter_max_shift_iterations:
            found = _best_shift(hyp, ref, index, peq, cur, cfg)
            if found is None:
                break
            hyp, cur = found
            shifts += 1
    return cur + shifts, shifts


def ter_stats(hyp: str, refs: Sequence[str], config: MetricConfig | None = None) -> TerStats:
    cfg = config or MetricConfig()
    if isinstance(refs, str):
        refs = [refs]
    if not refs:
        raise InvalidArgument("TER needs at least one reference")
    case = cfg.case("ter")
    hyp_toks = list(tokenize(hyp, case).tokens)
    ref_toks = [list(tokenize(r, case).tokens) for r in refs]
    best = min((_ter_single(hyp_toks, r, cfg) for r in ref_toks), key=lambda t: t[0])
    avg_len = sum(len(r) for r in ref_toks) / len(ref_toks)
    return TerStats(edits=best[0], shifts=best[1], ref_length=avg_len)


def ter(hyp: str, refs: Sequence[str], config: MetricConfig | None = None) -> float:
    """TER in percent: edits (including shifts) per average reference word."""
    return ter_stats(hyp, refs, config).score


def corpus_ter(hyps: Sequence[str], refs: Sequence[Sequence[str]], config: MetricConfig | None = None) -> float:
    """Total edits over total average reference length."""
    if len(hyps) != len(refs):
        raise InvalidArgument("hypothesis and reference counts differ")
    edits = 0
    length = 0.0
    for h, r in zip(hyps, refs):
        st = ter_stats(h, r, config)
        edits += st.edits
        length += st.ref_length
    return TerStats(edits, 0, length).score
