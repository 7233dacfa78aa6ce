"""Explicit (b, k)-hash codes at desk scale.

A code is a set of words over ``{1, ..., b}``; it is a (b, k)-hash code when
every k distinct words have a coordinate where their symbols are pairwise
distinct.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .simplex import ParameterError

SUBSET_GUARD = 10**7
CHUNK = 50_000
# '0' stands for symbol 36
SYMBOLS = "123456789abcdefghijklmnopqrstuvwxyz0"


class CodeFormatError(ParameterError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SearchBudgetExceeded(ParameterError):
    pass


@dataclass(frozen=True)
class Code:
    b: int
    n: int
    words: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.b < 1 or self.n < 1:
            raise ParameterError(f"need b >= 1 and n >= 1, got b={self.b}, n={self.n}")
        words = tuple(tuple(int(s) for s in w) for w in self.words)
        for w in words:
            if len(w) != self.n:
                raise ParameterError(f"word {w} has length {len(w)}, expected {self.n}")
            if min(w) < 1 or max(w) > self.b:
                raise ParameterError(f"word {w} has symbols outside 1..{self.b}")
        if len(set(words)) != len(words):
            raise ParameterError("duplicate words")
        object.__setattr__(self, "words", tuple(sorted(words)))

    def __len__(self) -> int:
        return len(self.words)

    @property
    def rate(self) -> float:
        """log2 |C| / n (zero for the empty code)."""
        return math.log2(len(self.words)) / self.n if self.words else 0.0

    def array(self) -> np.ndarray:
        return np.array(self.words, dtype=np.int16).reshape(len(self.words), self.n)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: tuple[tuple[int, ...], ...] | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def _separated(block: np.ndarray) -> np.ndarray:
    """For a (m, k, n) block: does some coordinate carry k distinct symbols?"""
    s = np.sort(block, axis=1)
    distinct = np.all(s[:, 1:, :] != s[:, :-1, :], axis=1)
    return distinct.any(axis=1)


def verify_hash_code(code: Code, k: int) -> Verdict:
    """Check the k-hash property by enumerating k-subsets of words."""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if k > code.b:
        raise ParameterError(f"k={k} exceeds alphabet size b={code.b}")
    N = len(code)
    if N < k:
        return Verdict(True)
    total = math.comb(N, k)
    if total > SUBSET_GUARD:
        raise ParameterError(f"C({N},{k}) = {total} subsets exceeds guard {SUBSET_GUARD}")
    W = code.array()
    combos = itertools.combinations(range(N), k)
    done = 0
    while True:
        idx = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, CHUNK)), dtype=np.int64)
        if idx.size == 0:
            return Verdict(True, checked=done)
        idx = idx.reshape(-1, k)
        ok = _separated(W[idx])
        if not ok.all():
            bad = idx[int(np.argmin(ok))]
            return Verdict(False, tuple(code.words[i] for i in bad), done + int(np.argmin(ok)) + 1)
        done += len(idx)


def _compatible(chosen: Sequence[np.ndarray], cands: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """Mask of candidates c such that every (k-2)-subset T of ``chosen`` gives T + {w, c} separated."""
    mask = np.ones(len(cands), dtype=bool)
    if k == 2:
        return np.any(cands != w, axis=1)
    for T in itertools.combinations(chosen, k - 2):
        fixed = np.stack(T + (w,))
        block = np.concatenate([np.broadcast_to(fixed, (len(cands),) + fixed.shape), cands[:, None, :]], axis=1)
        mask &= _separated(block)
        if not mask.any():
            break
    return mask


@dataclass
class SearchResult:
    code: Code
    exact: bool
    nodes: int
    notes: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.code)


def _all_words(b: int, n: int) -> np.ndarray:
    return np.array(list(itertools.product(range(1, b + 1), repeat=n)), dtype=np.int16).reshape(-1, n)


def _greedy(b: int, k: int, n: int, order: Iterable[int], words: np.ndarray) -> list[int]:
    chosen: list[int] = []
    alive = np.ones(len(words), dtype=bool)
    for i in order:
        if not alive[i]:
            continue
        alive[i] = False
        chosen_w = [words[c] for c in chosen]
        if len(chosen) >= k - 2:
            rest = np.flatnonzero(alive)
            alive[rest] = _compatible(chosen_w, words[rest], words[i], k)
        chosen.append(i)
    return chosen


def max_code_search(
    b: int,
    k: int,
    n: int,
    budget: int = 10**6,
    mode: str = "auto",
    seed: int | None = None,
) -> SearchResult:
    """Largest (b, k)-hash code of length n.

    ``exact`` runs branch-and-bound over words in lexicographic order with the
    first word fixed to all ones; ``budget`` caps both the word space for
    ``auto`` to pick exact mode and the number of search nodes. ``greedy``
    returns an inextensible code, scanning words in lexicographic order or in
    a seeded random order.
    """
    if not 2 <= k <= b:
        raise ParameterError(f"need 2 <= k <= b, got b={b}, k={k}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if mode not in ("auto", "exact", "greedy"):
        raise ParameterError(f"unknown search mode {mode!r}")
    space = b**n
    if mode == "auto":
        mode = "exact" if space <= budget else "greedy"
    if space > 10**7:
        raise ParameterError(f"word space b^n = {space} too large")
    words = _all_words(b, n)

    if mode == "greedy":
        order = np.arange(space) if seed is None else np.random.default_rng(seed).permutation(space)
        chosen = _greedy(b, k, n, order, words)
        code = Code(b, n, [tuple(words[i]) for i in chosen])
        return SearchResult(code, False, len(chosen), ["greedy: inextensible, not necessarily maximum"])

    if space > budget:
        raise SearchBudgetExceeded(f"word space {space} exceeds budget {budget} for exact search")
    best: list[int] = _greedy(b, k, n, range(space), words)
    nodes = 0

    def extend(chosen: list[int], cands: np.ndarray):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"exact search exceeded {budget} nodes")
        if len(chosen) > len(best):
            best = list(chosen)
        for pos, c in enumerate(cands):
            if len(chosen) + len(cands) - pos <= len(best):
                return
            rest = cands[pos + 1 :]
            if len(chosen) + 1 >= k - 1 and len(rest):
                rest = rest[_compatible([words[i] for i in chosen], words[rest], words[c], k)]
            extend(chosen + [int(c)], rest)

    first = np.arange(1, space)
    if k == 2:
        first = first[_compatible([], words[first], words[0], k)]
    extend([0], first)
    code = Code(b, n, [tuple(words[i]) for i in best])
    return SearchResult(code, True, nodes)


def parse_code(text: str) -> Code:
    """Parse ``b n`` followed by one word per line.

    A word is either ``n`` single characters from ``SYMBOLS`` or ``n``
    whitespace-separated integers. Blank lines and ``#`` comments are skipped.
    """
    header = None
    words: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise CodeFormatError(f"expected header 'b n', got {line!r}", lineno)
            b, n = map(int, parts)
            if b < 1 or n < 1:
                raise CodeFormatError("b and n must be positive", lineno)
            header = (b, n)
            continue
        b, n = header
        tokens = line.split()
        if len(tokens) == 1 and n > 1 or (len(tokens) == 1 and not tokens[0].isdigit()):
            tok = tokens[0].lower()
            if b > len(SYMBOLS):
                raise CodeFormatError(f"single-character words need b <= {len(SYMBOLS)}", lineno)
            try:
                word = tuple(SYMBOLS.index(ch) + 1 for ch in tok)
            except ValueError:
                raise CodeFormatError(f"bad symbol in {tok!r}", lineno) from None
        else:
            try:
                word = tuple(int(t) for t in tokens)
            except ValueError:
                raise CodeFormatError(f"bad integer in {line!r}", lineno) from None
        if len(word) != n:
            raise CodeFormatError(f"word has length {len(word)}, expected {n}", lineno)
        if min(word) < 1 or max(word) > b:
            raise CodeFormatError(f"symbol outside 1..{b}", lineno)
        if word in seen:
            raise CodeFormatError(f"duplicate of line {seen[word]}", lineno)
        seen[word] = lineno
        words.append(word)
    if header is None:
        raise CodeFormatError("missing header 'b n'")
    return Code(header[0], header[1], words)


def format_word(word: Sequence[int], b: int) -> str:
    if b <= len(SYMBOLS):
        return "".join(SYMBOLS[s - 1] for s in word)
    return " ".join(map(str, word))


def format_code(code: Code) -> str:
    lines = [f"{code.b} {code.n}"] + [format_word(w, code.b) for w in code.words]
    return "\n".join(lines) + "\n"


def read_code(path: str | Path) -> Code:
    return parse_code(Path(path).read_text())


def write_code(code: Code, path: str | Path) -> None:
    Path(path).write_text(format_code(code))
