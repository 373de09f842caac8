"""Operand-grid layout for n-bit squaring (circuit-free).

Squaring expands as a^2 = a_0 + sum_i a_i*2^(2i) + sum_{i<j} a_i*a_j*2^(i+j+1).
This module enumerates those terms (partial products a_i*a_j and single-bit
copies a_i) and packs them into a grid of adder operand rows T_0..T_R so that
only R pairwise additions are needed, half as many as a naive row-per-shift
arrangement.  Rows T_0 and T_1 are 2n-3 cells wide, row T_k is 2n-2k cells
wide for k >= 2, and cells not holding a term are zero pads.

Column c of rows T_0/T_1 carries weight 2^(c+2); column c of row T_k (k >= 2)
carries weight 2^(2k+c).  ``grid_value`` evaluates the whole grid under that
weighting and must reproduce a^2 exactly for every input; the exhaustive test
of that identity is the correctness contract for the placement rules.

Construction is assert-on-write: any double placement or leftover empty cell
raises, because an index slip in the four placement cases would otherwise
silently corrupt the grid.
"""

from __future__ import annotations

from dataclasses import dataclass


class UnsupportedWidthError(ValueError):
    """Input width must exceed 4 bits."""

    def __init__(self, n: int):
        super().__init__(f"input width must satisfy n > 4, got n={n}")
        self.n = n


class PlacementError(Exception):
    """Grid cell placed twice or left empty by the placement rules."""


@dataclass(frozen=True)
class PartialProduct:
    """The term a_i * a_j with i < j."""

    i: int
    j: int

    def label(self) -> str:
        return f"a{self.i}a{self.j}"


@dataclass(frozen=True)
class InputCopy:
    """A copy of input bit a_i (the squared-bit term a_i * 2^(2i))."""

    i: int

    def label(self) -> str:
        return f"a{self.i}"


@dataclass(frozen=True)
class ZeroPad:
    """An ancilla cell holding constant 0."""

    def label(self) -> str:
        return "0"


ZERO = ZeroPad()

GridEntry = "PartialProduct | InputCopy | ZeroPad"


def row_widths(n: int) -> tuple[int, ...]:
    """Cell counts of rows T_0..T_R: (2n-3, 2n-3, 2n-4, 2n-6, ...)."""
    _check_width(n)
    r = n // 2 if n % 2 == 0 else (n - 1) // 2
    return (2 * n - 3, 2 * n - 3) + tuple(2 * n - 2 * k for k in range(2, r + 1))


def _check_width(n: int) -> None:
    if n <= 4:
        raise UnsupportedWidthError(n)


@dataclass(frozen=True)
class OperandGrid:
    """Rows T_0..T_R of placed terms, least-significant column first.

    ``interior_pads`` counts the zero cells placed while arranging the
    terms; ``left_pads`` the zero cells of the final high-order padding
    phase.
    """

    n: int
    rows: tuple[tuple, ...]
    interior_pads: int
    left_pads: int

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def entry(self, row: int, col: int):
        return self.rows[row][col]

    def cells(self):
        """Yield (row, col, entry) in row-major order."""
        for r, row in enumerate(self.rows):
            for c, e in enumerate(row):
                yield r, c, e


def partial_products(n: int) -> list:
    """All grid source terms in generation order: for each i = 1..n-1 the
    products a_(i-1)*a_j for j = i..n-1, then the copy of a_i."""
    _check_width(n)
    out: list = []
    for i in range(1, n):
        for j in range(i, n):
            out.append(PartialProduct(i - 1, j))
        out.append(InputCopy(i))
    return out


class _GridBuilder:
    def __init__(self, n: int):
        self.n = n
        self.widths = row_widths(n)
        self.rows: list[list] = [[None] * w for w in self.widths]
        self.pad_counts = [0, 0]  # interior, left

    def put(self, row: int, col: int, entry, pad_phase: int = 0) -> None:
        if not (0 <= row < len(self.rows) and 0 <= col < self.widths[row]):
            raise PlacementError(f"cell T({row},{col}) outside the grid for n={self.n}")
        if self.rows[row][col] is not None:
            raise PlacementError(
                f"cell T({row},{col}) placed twice: {self.rows[row][col]} then {entry}")
        self.rows[row][col] = entry
        if isinstance(entry, ZeroPad):
            self.pad_counts[pad_phase] += 1

    def finish(self) -> OperandGrid:
        for r, row in enumerate(self.rows):
            for c, e in enumerate(row):
                if e is None:
                    raise PlacementError(f"cell T({r},{c}) never placed for n={self.n}")
        grid = OperandGrid(self.n, tuple(tuple(row) for row in self.rows),
                           self.pad_counts[0], self.pad_counts[1])
        placed = [e for _, _, e in grid.cells() if not isinstance(e, ZeroPad)]
        expected = partial_products(self.n)
        if sorted(placed, key=repr) != sorted(expected, key=repr):
            raise PlacementError(f"grid terms differ from the source set for n={self.n}")
        return grid


def arrange(n: int) -> OperandGrid:
    """Place every partial product and input copy into the operand grid.

    The placement walks diagonal index i = 1..2n-3 (the output-bit weight
    of the terms being placed is 2^(i+1)) with four cases by parity of i
    and whether i exceeds n-1, then zero-pads first the interior gaps and
    finally the high-order (left) ends of rows T_2 and up so each row is
    a full adder operand.
    """
    _check_width(n)
    g = _GridBuilder(n)
    for i in range(1, 2 * n - 2):
        odd = i % 2 == 1
        if i <= n - 1 and odd:
            g.put(0, i - 1, InputCopy((i + 1) // 2))
            g.put(1, i - 1, PartialProduct(0, i))
            if i > 1:
                for j in range(2, (i + 1) // 2 + 1):
                    g.put(j, i - 2 * j + 1, PartialProduct(j - 1, i - j + 1))
        elif i <= n - 1:
            for j in range(1, i // 2 + 1):
                col = i - 1 if j <= 2 else i - 2 * j + 3
                g.put(j - 1, col, PartialProduct(j - 1, i - j + 1))
            g.put(i // 2, 1, ZERO)
        elif odd:
            g.put(0, i - 1, InputCopy((i + 1) // 2))
            g.put(1, i - 1, PartialProduct(i - n + 1, n - 1))
            if i != 2 * n - 3:
                for j in range(2, (2 * n - i - 1) // 2 + 1):
                    g.put(j, i - 2 * j + 1, PartialProduct(i - n + j, n - j))
        else:
            for j in range(1, (2 * n - i - 2) // 2 + 1):
                col = i - 1 if j <= 2 else i - 2 * j + 3
                g.put(j - 1, col, PartialProduct(i - n + j, n - j))
            if n % 2 == 1:
                if i != 2 * n - 4:
                    g.put((2 * n - i - 2) // 2, 2 * (i - n) + 3, ZERO)
                    g.put((2 * n - i) // 2, 2 * (i - n) + 1, ZERO)
                else:
                    g.put((2 * n - i - 2) // 2, i - 1, ZERO)
                    g.put((2 * n - i) // 2, i - 3, ZERO)
            else:
                if i != 2 * n - 4 and i != n:
                    g.put((2 * n - i - 2) // 2, 2 * (i - n) + 3, ZERO)
                    g.put((2 * n - i) // 2, 2 * (i - n) + 1, ZERO)
                elif i == n:
                    g.put((2 * n - i - 2) // 2, 3, ZERO)
                    g.put((2 * n - i) // 2, 1, ZERO)
                else:
                    g.put((2 * n - i - 2) // 2, i - 1, ZERO)
                    g.put((2 * n - i) // 2, i - 3, ZERO)

    # left pads: fill the high-order end of rows T_2..T_R
    top = (n - 3) // 2 if n % 2 == 1 else (n - 2) // 2
    for i in range(1, top + 1):
        for j in range(1, 2 * i + 1):
            g.put(i + 1, 2 * n - 3 - 4 * i + j, ZERO, pad_phase=1)
    return g.finish()


def grid_value(grid: OperandGrid, a: int) -> int:
    """Evaluate the grid on input a: bit_0(a) + 4*(T_0 + T_1) + sum 4^k T_k,
    each row read as a little-endian integer of its cell values."""
    if not 0 <= a < (1 << grid.n):
        raise ValueError(f"input {a} out of range for n={grid.n}")
    bit = lambda i: (a >> i) & 1
    total = bit(0)
    for k, row in enumerate(grid.rows):
        row_val = 0
        for c, e in enumerate(row):
            if isinstance(e, PartialProduct):
                v = bit(e.i) & bit(e.j)
            elif isinstance(e, InputCopy):
                v = bit(e.i)
            else:
                v = 0
            row_val += v << c
        total += row_val * (4 if k <= 1 else 4 ** k)
    return total


def dump_grid(grid: OperandGrid) -> str:
    """One row per line, cells comma-separated as a{i}a{j} / a{i} / 0."""
    return "\n".join(",".join(e.label() for e in row) for row in grid.rows) + "\n"
