"""Symbol strings over a dense integer alphabet and the package's error types."""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence


class AlphabetMismatchError(ValueError):
    """Two strings were combined that live over different alphabets."""


class ResourceGuardError(RuntimeError):
    """An exact computation would exceed a configured resource cap."""


@dataclass(frozen=True)
class SymbolString:
    """A string over the alphabet ``{0, ..., k-1}``.

    Symbols are plain Python integers so that alphabets as large as 2**40
    (or larger) are representable.
    """

    k: int
    symbols: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if self.k < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.k}")
        for s in self.symbols:
            if not 0 <= s < self.k:
                raise ValueError(f"symbol {s} outside alphabet of size {self.k}")

    @classmethod
    def from_text(cls, text: str, k: int) -> SymbolString:
        """Map 'a', 'b', 'c', ... to 0, 1, 2, ...; handy in tests and demos."""
        return cls(k, tuple(string.ascii_lowercase.index(c) for c in text))

    def to_text(self) -> str:
        if self.k > 26:
            raise ValueError("text rendering only available for k <= 26")
        return "".join(string.ascii_lowercase[s] for s in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def reversed(self) -> SymbolString:
        return SymbolString(self.k, self.symbols[::-1])

    def permuted(self, perm: Sequence[int]) -> SymbolString:
        """Apply the alphabet permutation ``perm`` (a sequence of length k)."""
        return SymbolString(self.k, tuple(perm[s] for s in self.symbols))


def as_symbol_string(x: SymbolString | Iterable[int], k: int | None = None) -> SymbolString:
    if isinstance(x, SymbolString):
        if k is not None and x.k != k:
            raise AlphabetMismatchError(f"expected alphabet size {k}, got {x.k}")
        return x
    if k is None:
        raise ValueError("alphabet size k is required for raw symbol sequences")
    return SymbolString(k, tuple(x))


def check_same_alphabet(x: SymbolString, y: SymbolString) -> None:
    if x.k != y.k:
        raise AlphabetMismatchError(f"alphabet sizes differ: {x.k} vs {y.k}")
