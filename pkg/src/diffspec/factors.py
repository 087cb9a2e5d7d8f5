"""Sliding block maps and the factors they induce.

A block map g reads the word x_{n+m} ... x_{n+m+l-1} of a sequence x and
emits one complex value; sliding it over x gives the factor sequence
(Phi_g x)(n) = g(x restricted to the block at n).  Every such map
commutes with the shift, which is what makes the induced map a factor
map between subshifts.

Tables are keyed by letter-id words.  A map may carry a default output
for words missing from its table (used by indicator maps, where all but
one word go to 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MissingTableEntry, WindowTooShort
from .subshift import LETTER_NAMES, SymbolicWindow, letter_id


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _parse_complex(s: str) -> complex:
    s = s.strip()
    if s.endswith("i"):
        return complex(s[:-1] + "j")
    return complex(s)


@dataclass
class BlockMap:
    """A local rule of window length ``length`` anchored at ``offset``.

    table maps words (tuples of source letter ids) to complex outputs.
    If ``default`` is None, applying the map to a word without a table
    entry raises MissingTableEntry; otherwise the default value is used.
    """

    offset: int
    length: int
    table: dict[tuple[int, ...], complex]
    default: complex | None = None

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("block length must be positive")
        for w in self.table:
            if len(w) != self.length:
                raise ValueError(f"table word {w} has wrong length")
        self.table = {w: complex(v) for w, v in self.table.items()}

    def output(self, word: tuple[int, ...]) -> complex:
        if word in self.table:
            return self.table[word]
        if self.default is None:
            raise MissingTableEntry(f"no entry for word {word}")
        return complex(self.default)

    def output_values(self) -> list[complex]:
        """Distinct outputs in canonical (re, im) order."""
        vals = set(self.table.values())
        if self.default is not None:
            vals.add(complex(self.default))
        return sorted(vals, key=lambda z: (z.real, z.imag))

    def serialize(self) -> str:
        lines = [f"offset {self.offset} length {self.length}"]
        for w in sorted(self.table):
            name = "".join(LETTER_NAMES[c] for c in w)
            lines.append(f"{name} -> {_fmt_complex(self.table[w])}")
        if self.default is not None:
            lines.append(f"* -> {_fmt_complex(self.default)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "BlockMap":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("offset"):
            raise ValueError("block map file must start with an offset header")
        head = lines[0].split()
        if len(head) != 4 or head[2] != "length":
            raise ValueError(f"bad header {lines[0]!r}")
        offset, length = int(head[1]), int(head[3])
        table: dict[tuple[int, ...], complex] = {}
        default: complex | None = None
        for ln in lines[1:]:
            left, arrow, right = ln.partition("->")
            if not arrow:
                raise ValueError(f"bad table line {ln!r}")
            src = left.strip()
            val = _parse_complex(right)
            if src == "*":
                default = val
                continue
            if len(src) != length:
                raise ValueError(f"word {src!r} does not match length {length}")
            word = tuple(letter_id(c, len(LETTER_NAMES)) for c in src)
            table[word] = val
        return cls(offset, length, table, default)


def identity_map(window: SymbolicWindow) -> BlockMap:
    """The one-letter map sending each letter to its window weight."""
    table = {(c,): complex(w) for c, w in window.weights.items()}
    return BlockMap(0, 1, table)


def xor_map() -> BlockMap:
    """g(x0, x1) = x0 XOR x1 on a two-letter alphabet."""
    table = {
        (0, 0): 0.0 + 0j,
        (0, 1): 1.0 + 0j,
        (1, 0): 1.0 + 0j,
        (1, 1): 0.0 + 0j,
    }
    return BlockMap(0, 2, table)


def indicator_block_map(word: tuple[int, ...], offset: int = 0) -> BlockMap:
    """The indicator 1_{word, offset}: outputs 1 exactly on ``word``."""
    if len(word) == 0:
        raise ValueError("empty word")
    return BlockMap(offset, len(word), {tuple(word): 1.0 + 0j}, default=0.0 + 0j)


def _output_ids(g: BlockMap) -> dict[complex, int]:
    return {v: i for i, v in enumerate(g.output_values())}


def apply_block_map(window: SymbolicWindow, g: BlockMap) -> SymbolicWindow:
    """Slide g over the window; the result is the factor-image window.

    Output index n is defined when the whole block [n + offset,
    n + offset + length - 1] lies inside the window, so the result
    shrinks by length - 1 letters and shifts by -offset.
    """
    out_lo = window.lo - g.offset
    out_hi = window.hi - g.offset - (g.length - 1)
    if out_hi < out_lo:
        raise WindowTooShort("window shorter than the block length")
    if not (out_lo <= 0 <= out_hi):
        raise WindowTooShort("factor image does not cover the index origin")

    n = len(window.letters)
    ell = g.length
    base = int(window.letters.max()) + 1
    # encode each length-ell block as an integer in base ``base``
    codes = np.zeros(n - ell + 1, dtype=np.int64)
    for j in range(ell):
        codes = codes * base + window.letters[j : j + len(codes)]

    code_to_val: dict[int, complex] = {}
    for w, v in g.table.items():
        c = 0
        for x in w:
            c = c * base + x
        code_to_val[c] = v

    uniq = np.unique(codes)
    missing = [int(c) for c in uniq if int(c) not in code_to_val]
    if missing and g.default is None:
        raise MissingTableEntry(f"{len(missing)} block words without table entry")

    ids = _output_ids(g)
    id_of_code = np.zeros(int(uniq.max()) + 1, dtype=np.int16)
    for c in uniq:
        v = code_to_val.get(int(c), g.default)
        id_of_code[int(c)] = ids[complex(v)]
    out_letters = id_of_code[codes]
    out_weights = {i: complex(v) for v, i in ids.items()}
    return SymbolicWindow(out_letters, out_lo, out_weights)


def evaluate_at(window: SymbolicWindow, g: BlockMap, n: int) -> complex:
    """g evaluated on the block of the window anchored at n."""
    word = window.subword(n + g.offset, g.length)
    return g.output(word)


def compose(outer: BlockMap, inner: BlockMap) -> BlockMap:
    """The block map with apply(x, composed) == apply(apply(x, inner), outer).

    The outer table is keyed by inner-output letter ids in canonical
    (re, im) value order, matching apply_block_map's id assignment.
    """
    from itertools import product

    ids = _output_ids(inner)
    length = inner.length + outer.length - 1
    if inner.default is not None or outer.default is not None:
        raise ValueError("composition of defaulted maps is not supported")

    alphabet = sorted({c for w in inner.table for c in w})
    table: dict[tuple[int, ...], complex] = {}
    for word in product(alphabet, repeat=length):
        try:
            mids = tuple(
                ids[complex(inner.table[word[j : j + inner.length]])]
                for j in range(outer.length)
            )
        except KeyError:
            continue
        if mids in outer.table:
            table[word] = outer.table[mids]
    return BlockMap(inner.offset + outer.offset, length, table)


@dataclass
class EquivarianceReport:
    """Outcome of checking Phi_g(S^t x) == S^t Phi_g(x) over a shift range."""

    ok: bool
    shifts_checked: list[int]
    first_violation: tuple[int, int] | None
    max_abs_dev: float


def verify_factor_equivariance(
    window: SymbolicWindow,
    g: BlockMap,
    shifts: range | list[int],
    reference: SymbolicWindow | None = None,
) -> EquivarianceReport:
    """Compare the factor image of each shifted window against the
    shifted factor image.

    ``reference`` defaults to apply_block_map(window, g); passing an
    independently computed image turns this into a consistency check of
    that image.  Violations are reported, never raised.
    """
    if reference is None:
        reference = apply_block_map(window, g)
    ref_vals = reference.values()
    first: tuple[int, int] | None = None
    max_dev = 0.0
    checked: list[int] = []
    for t in shifts:
        shifted = window.shifted(t)
        try:
            out = apply_block_map(shifted, g)
        except WindowTooShort:
            continue
        checked.append(t)
        # (S^t Phi x)(n) = (Phi x)(n + t); overlap in output indices
        lo = max(out.lo, reference.lo - t)
        hi = min(out.hi, reference.hi - t)
        if hi < lo:
            continue
        a = out.values()[lo - out.lo : hi - out.lo + 1]
        b = ref_vals[lo + t - reference.lo : hi + t - reference.lo + 1]
        dev = np.abs(a - b)
        if dev.size:
            d = float(dev.max())
            max_dev = max(max_dev, d)
            if d > 1e-12 and first is None:
                n_bad = int(np.argmax(dev > 1e-12)) + lo
                first = (t, n_bad)
    return EquivarianceReport(first is None, checked, first, max_dev)
