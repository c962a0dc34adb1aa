"""Base-3 digit stream of the constant ``c`` and the exact enclosures built on it.

``c = 0.11 t1 t2 t3 ...`` in base 3, where ``t1, t2, ...`` run through every
finite tuple over ``{0, 2}``.  In canonical mode the tuples are concatenated in
length-lexicographic order (``0 < 2``); an explicit digit file may supply any
other ordering.  Digits are 1-indexed: ``c_digits(1) == "1"``.

``c`` is irrational, so it is only ever held as a closed rational interval.
:class:`CConstant` decides signs of low-degree polynomials in ``c`` by
enclosing ``c`` ever more tightly, up to a hard digit cap.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .interval import RationalInterval

CANONICAL = "canonical"
EXPLICIT_FILE = "file"

DEFAULT_PRECISION = 128
PRECISION_CAP = 100_000


class PrecisionExhausted(ArithmeticError):
    """A comparison involving ``c`` stayed undecided at the digit cap."""


class StreamExhausted(LookupError):
    """An explicit digit file holds fewer digits than were requested."""


class DigitFileError(ValueError):
    """A digit file is malformed."""


class NotFoundWithinBound(LookupError):
    """A target block does not occur within the scanned prefix."""


def enumerate_tuples(max_len: int) -> list[tuple[int, ...]]:
    """All ``{0, 2}``-tuples of length ``1..max_len`` in length-lexicographic order."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    out = []
    for length in range(1, max_len + 1):
        out.extend(itertools.product((0, 2), repeat=length))
    return out


def occurrence_index(block: Sequence[int] | str) -> int:
    """Shift ``k`` at which ``block`` sits inside its own length-group of the canonical stream.

    Digits ``k+1 .. k+len(block)`` of the canonical stream equal ``block``.  The
    smallest occurrence (see :func:`find_shift`) can only be earlier.
    """
    digits = _as_digit_str(block)
    n = len(digits)
    if n == 0 or set(digits) - {"0", "2"}:
        raise ValueError("block must be a nonempty {0,2} sequence")
    rank = int(digits.replace("2", "1"), 2)
    # 2 leading digits "11", then sum_{l<n} l*2^l = (n-2)*2^n + 2 digits of shorter tuples
    return 2 + (n - 2) * 2**n + 2 + n * rank


def _as_digit_str(digits) -> str:
    if isinstance(digits, str):
        return digits
    return "".join(str(d) for d in digits)


class DigitStream:
    """Lazily generated, cached digit sequence of ``c``.

    Generated prefixes are immutable strings; extension is serialized by a
    lock so one stream may be read from many threads.
    """

    def __init__(self, mode: str = CANONICAL, digits: str = "", source: Optional[str] = None):
        if mode not in (CANONICAL, EXPLICIT_FILE):
            raise ValueError(f"unknown enumeration mode {mode!r}")
        self.mode = mode
        self.source = source
        self._digits = digits if mode == EXPLICIT_FILE else "11"
        self._next_len = 1
        self._lock = threading.Lock()

    @classmethod
    def canonical(cls) -> "DigitStream":
        return cls(CANONICAL)

    @classmethod
    def from_text(cls, text: str, source: Optional[str] = None) -> "DigitStream":
        body = "".join(text.split())
        if body.startswith("0."):
            body = body[2:]
        bad = sorted(set(body) - set("012"))
        if bad:
            raise DigitFileError(f"invalid digit(s) {''.join(bad)!r}; only 0, 1, 2 are allowed")
        if not body.startswith("11"):
            raise DigitFileError("digit file must begin with '11'")
        for pos, ch in enumerate(body[2:], start=3):
            if ch == "1":
                raise DigitFileError(f"digit 1 at position {pos}; only 0 and 2 may follow the leading '11'")
        return cls(EXPLICIT_FILE, digits=body, source=source)

    @classmethod
    def from_file(cls, path) -> "DigitStream":
        path = Path(path)
        return cls.from_text(path.read_text(), source=str(path))

    @property
    def available(self) -> Optional[int]:
        """Number of digits that can ever be produced (``None`` means unbounded)."""
        return len(self._digits) if self.mode == EXPLICIT_FILE else None

    def digits(self, n: int) -> str:
        """``d_1 ... d_n`` as a string."""
        if n < 0:
            raise ValueError("digit count must be non-negative")
        if len(self._digits) < n:
            if self.mode == EXPLICIT_FILE:
                raise StreamExhausted(
                    f"digit file {self.source or '<text>'} provides {len(self._digits)} digits, {n} requested"
                )
            self._extend(n)
        return self._digits[:n]

    def _extend(self, n: int) -> None:
        with self._lock:
            digits = self._digits
            length = self._next_len
            parts = [digits]
            size = len(digits)
            while size < n:
                block = "".join("".join(t) for t in itertools.product("02", repeat=length))
                parts.append(block)
                size += len(block)
                length += 1
            self._digits = "".join(parts)
            self._next_len = length

    def __repr__(self):
        return f"DigitStream(mode={self.mode!r}, source={self.source!r})"


_DEFAULT_STREAM = DigitStream.canonical()


def default_stream() -> DigitStream:
    return _DEFAULT_STREAM


def c_digits(n: int, stream: Optional[DigitStream] = None) -> str:
    if n < 1:
        raise ValueError("n must be >= 1")
    return (stream or _DEFAULT_STREAM).digits(n)


def truncation_value(digits) -> Fraction:
    """Exact value of the base-3 fraction ``0.d1 d2 ... dn``."""
    s = _as_digit_str(digits)
    if not s or set(s) - set("012"):
        raise ValueError(f"not a nonempty base-3 digit sequence: {s!r}")
    return Fraction(int(s, 3), 3 ** len(s))


def c_interval(p: int, stream: Optional[DigitStream] = None) -> RationalInterval:
    """``[T_p, T_p + 3^-p]`` where ``T_p`` is the ``p``-digit truncation of ``c``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    digits = c_digits(p, stream)
    scale = 3**p
    num = int(digits, 3)
    return RationalInterval(Fraction(num, scale), Fraction(num + 1, scale))


def shift_digits(k: int, n: int, stream: Optional[DigitStream] = None) -> str:
    """Digits ``d_{k+1} ... d_{k+n}``, i.e. the first ``n`` digits of ``sigma^k(c)``."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    return (stream or _DEFAULT_STREAM).digits(k + n)[k:]


def shift_interval(k: int, p: int, stream: Optional[DigitStream] = None) -> RationalInterval:
    """Enclosure of ``sigma^k(c)`` from ``p`` digits after the shift."""
    digits = shift_digits(k, p, stream)
    num = int(digits, 3)
    scale = 3**p
    return RationalInterval(Fraction(num, scale), Fraction(num + 1, scale))


@dataclass(frozen=True)
class CantorPoint:
    """Finite base-3 expansion ``0.y1 y2 ... yn`` with every digit in ``{0, 2}``."""

    digits: str

    def __post_init__(self):
        digits = _as_digit_str(self.digits)
        if not digits or set(digits) - {"0", "2"}:
            raise ValueError(f"Cantor digits must be a nonempty {{0,2}} sequence, got {digits!r}")
        object.__setattr__(self, "digits", digits)

    @property
    def value(self) -> Fraction:
        return truncation_value(self.digits)

    def __len__(self):
        return len(self.digits)


def find_shift(target, max_search: int, stream: Optional[DigitStream] = None) -> int:
    """Smallest ``k >= 2`` with ``d_{k+i} = y_i`` for ``i = 1..n``, scanning ``max_search`` digits."""
    point = target if isinstance(target, CantorPoint) else CantorPoint(target)
    stream = stream or _DEFAULT_STREAM
    limit = max_search
    if stream.available is not None:
        limit = min(limit, stream.available)
    k = stream.digits(limit).find(point.digits, 2)
    if k < 0:
        raise NotFoundWithinBound(f"block {point.digits!r} not found in the first {max_search} digits")
    return k


Poly = tuple  # coefficients (a0, a1, a2) of a0 + a1*c + a2*c^2


def _poly_eval(poly: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(poly):
        acc = acc * x + coef
    return acc


def _trim(poly: Sequence) -> tuple:
    coeffs = list(poly)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) > 3:
        raise ValueError("only polynomials of degree <= 2 in c are supported")
    return tuple(Fraction(a) for a in coeffs)


class CConstant:
    """The irrational constant ``c`` held through its digit stream.

    ``interval(p)`` encloses ``c`` with width ``3^-p``.  ``sign`` and
    ``compare`` decide polynomial inequalities exactly: an identically zero
    polynomial has sign 0, anything else is refined from ``precision_start``
    by doubling until the sign is certain or ``precision_cap`` is reached.
    """

    def __init__(
        self,
        stream: Optional[DigitStream] = None,
        precision_start: int = DEFAULT_PRECISION,
        precision_cap: int = PRECISION_CAP,
    ):
        if precision_start < 1 or precision_start > precision_cap:
            raise ValueError("need 1 <= precision_start <= precision_cap")
        self.stream = stream or _DEFAULT_STREAM
        self.precision_start = precision_start
        self.precision_cap = precision_cap
        self.precision_used = precision_start
        self._intervals: dict[int, RationalInterval] = {}

    @property
    def effective_cap(self) -> int:
        avail = self.stream.available
        return self.precision_cap if avail is None else min(self.precision_cap, avail)

    def interval(self, p: Optional[int] = None) -> RationalInterval:
        p = self.precision_start if p is None else p
        iv = self._intervals.get(p)
        if iv is None:
            iv = self._intervals[p] = c_interval(p, self.stream)
        return iv

    def schedule(self) -> Iterator[int]:
        cap = self.effective_cap
        p = min(self.precision_start, cap)
        while True:
            yield p
            if p >= cap:
                return
            p = min(2 * p, cap)

    def range_of(self, poly: Sequence, p: Optional[int] = None) -> RationalInterval:
        """Exact range of a polynomial in ``c`` over the enclosure at precision ``p``."""
        poly = _trim(poly)
        if not poly:
            return RationalInterval.point(0)
        iv = self.interval(p)
        values = [_poly_eval(poly, iv.lo), _poly_eval(poly, iv.hi)]
        if len(poly) == 3:
            vertex = -poly[1] / (2 * poly[2])
            if iv.lo < vertex < iv.hi:
                values.append(_poly_eval(poly, vertex))
        return RationalInterval(min(values), max(values))

    def sign(self, poly: Sequence) -> int:
        """Exact sign of ``poly(c)``; raises :class:`PrecisionExhausted` at the cap."""
        poly = _trim(poly)
        if not poly:
            return 0
        if len(poly) == 1:
            return 1 if poly[0] > 0 else -1
        for p in self.schedule():
            rng = self.range_of(poly, p)
            if rng.lo > 0 or rng.hi < 0:
                if p > self.precision_used:
                    self.precision_used = p
                return 1 if rng.lo > 0 else -1
        raise PrecisionExhausted(
            f"sign of polynomial {tuple(str(a) for a in poly)} in c undecided at {self.effective_cap} digits"
        )

    def decided_range(self, poly: Sequence, threshold=0) -> tuple[int, RationalInterval, int]:
        """Sign of ``poly(c) - threshold`` plus the range of ``poly(c)`` at the deciding precision."""
        poly = _trim(poly)
        shifted = list(poly) or [Fraction(0)]
        shifted[0] = shifted[0] - threshold
        shifted = _trim(shifted)
        if len(shifted) <= 1:
            s = 0 if not shifted else (1 if shifted[0] > 0 else -1)
            return s, self.range_of(poly, self.precision_start), self.precision_start
        for p in self.schedule():
            rng = self.range_of(shifted, p)
            if rng.lo > 0 or rng.hi < 0:
                if p > self.precision_used:
                    self.precision_used = p
                return (1 if rng.lo > 0 else -1), self.range_of(poly, p), p
        raise PrecisionExhausted(f"comparison against {threshold} undecided at {self.effective_cap} digits")

    def __repr__(self):
        return f"CConstant({self.stream!r}, start={self.precision_start}, cap={self.precision_cap})"
