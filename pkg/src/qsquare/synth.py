"""End-to-end synthesis of the garbage-free n-bit squaring circuit.

The circuit is emitted in eight phases over input register A and output
positions P_0..P_{2n-1}:

1. one logical-AND per partial product and one CNOT-copy per input bit
   a_1..a_{n-1} onto fresh ancillae;
2./3. binding of those ancillae (plus fresh zero pads) to the operand
   grid rows T_0..T_R;
4. a (2n-3)-bit in-place addition of rows T_0 and T_1 with carry-out;
   its two low sum bits become P_2, P_3;
5./6. the remaining R-1 carry-less additions, each folding row T_{i+1}
   into the running sum V and peeling two more P bits (the final stage
   emits its whole sum into the top P positions);
7. CNOTs restoring the input copies in row T_0 to zero;
8. uncompute-ANDs releasing every remaining partial-product ancilla.

P_0 aliases input wire a_0 and P_1 is a dedicated zero wire; every sum
bit lands on a row-T_1 wire or the first adder's carry wire, so no wire
outside A and P carries state at the end.  The phase-8 schedule follows
the published index-case loops literally; entries that address a cell
holding no live partial product are skipped, leftover live cells are
released in reverse order of computation, and both kinds of divergence
are logged on the result rather than silently patched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .blocks import (
    adder_and_count,
    build_adder_in_place,
    build_logical_and,
    build_uncompute_and,
)
from .ir import Netlist
from .layout import (
    InputCopy,
    OperandGrid,
    PartialProduct,
    UnsupportedWidthError,
    arrange,
)


@dataclass(frozen=True)
class StageInfo:
    """One adder stage of the cascade."""

    index: int
    width: int
    with_carry_out: bool
    and_count: int


@dataclass(frozen=True)
class UncomputeEvent:
    """A phase-8 schedule entry that diverged from a live AND cell."""

    row: int
    col: int
    kind: str  # "skipped" (scheduled cell held no live AND) or "fallback"
    note: str


@dataclass
class SquarerCircuit:
    """A synthesized squaring circuit plus its layout metadata."""

    n: int
    netlist: Netlist
    grid: OperandGrid
    cell_wires: dict[tuple[int, int], int]
    output_map: dict[int, int]
    stages: list[StageInfo]
    uncompute_log: list[UncomputeEvent] = field(default_factory=list)

    @property
    def registers(self) -> dict[str, tuple[int, ...]]:
        return self.netlist.registers

    @property
    def input_wires(self) -> tuple[int, ...]:
        return self.registers["A"]

    def and_macro_counts(self) -> tuple[int, int]:
        """(partial-product ANDs, adder-internal ANDs)."""
        step1 = self.n * (self.n - 1) // 2
        return step1, sum(s.and_count for s in self.stages)


def stage_widths(n: int) -> list[int]:
    """Adder operand widths, first stage first: 2n-3, 2n-4, 2n-6, ..."""
    if n <= 4:
        raise UnsupportedWidthError(n)
    stages = n // 2 if n % 2 == 0 else (n - 1) // 2
    return [2 * n - 3] + [2 * n - 4 - 2 * i for i in range(stages - 1)]


def uncompute_schedule(n: int) -> list[tuple[int, int]]:
    """Phase-8 cell addresses (row, col) in the published loop order."""
    out: list[tuple[int, int]] = []
    for i in range(3, 2 * n - 2):
        if i <= n - 1:
            if i % 2 == 1:
                out.append((2, i - 3))
                if i > 3:
                    for i1 in range(1, (i + 1) // 2 - 1):
                        out.append((i1 + 2, i - 3 - 2 * i1))
            else:
                out.append((0, i - 1))
                if i > 4:
                    for i2 in range(1, i // 2 - 1):
                        out.append((i2 + 1, i - 1 - 2 * i2))
        else:
            if i % 2 == 1:
                if i != 2 * n - 3:
                    for i3 in range(1, (2 * n - i - 3) // 2 + 1):
                        out.append((i3 + 1, i - 1 - 2 * i3))
            else:
                out.append((0, i - 1))
                if i != 2 * n - 4 and i != 2 * n - 6:
                    for i4 in range(2, (2 * n - i - 4) // 2 + 1):
                        out.append((i4 + 1, i - 2 * i4 + 1))
    return out


def synthesize_squarer(n: int) -> SquarerCircuit:
    """Build the full squaring netlist for an n-bit input (n > 4).

    Deterministic: the same n always yields an identical netlist.
    """
    grid = arrange(n)  # validates n > 4
    nl = Netlist()
    a = nl.alloc_register("A", n, "input")

    # phase 1: partial products and input copies
    pp_wire: dict[tuple[int, int], int] = {}
    copy_wire: dict[int, int] = {}
    for i in range(1, n):
        for j in range(i, n):
            pp_wire[(i - 1, j)] = build_logical_and(nl, a[i - 1], a[j])
        w = nl.new_wire()
        nl.add_gate("prep0", w)
        nl.add_gate("cx", a[i], w)
        copy_wire[i] = w

    p1 = nl.alloc_register("P1", 1, "zero")[0]

    # phases 2-3: bind grid cells to wires (fresh zero wires for pads)
    cell_wires: dict[tuple[int, int], int] = {}
    for r, c, entry in grid.cells():
        if isinstance(entry, PartialProduct):
            cell_wires[(r, c)] = pp_wire[(entry.i, entry.j)]
        elif isinstance(entry, InputCopy):
            cell_wires[(r, c)] = copy_wire[entry.i]
        else:
            w = nl.new_wire()
            nl.add_gate("prep0", w)
            cell_wires[(r, c)] = w
    for r, row in enumerate(grid.rows):
        nl.register_alias(f"T{r}", tuple(cell_wires[(r, c)] for c in range(len(row))))

    # phases 4-6: the adder cascade
    widths = stage_widths(n)
    stages: list[StageInfo] = []
    output_map = {0: a[0], 1: p1}
    running = list(nl.registers["T1"])
    carry = build_adder_in_place(nl, nl.registers["T0"], running, with_carry_out=True)
    nl.register_alias("carry", (carry,))
    stages.append(StageInfo(0, widths[0], True, adder_and_count(widths[0], True)))
    sums = running + [carry]
    output_map[2], output_map[3] = sums[0], sums[1]
    running = sums[2:]
    nl.register_alias("V0", tuple(running))

    last = len(widths) - 1
    for i in range(1, last + 1):
        t_row = nl.registers[f"T{i + 1}"]
        build_adder_in_place(nl, t_row, running, with_carry_out=False)
        stages.append(StageInfo(i, widths[i], False, adder_and_count(widths[i], False)))
        if i < last:
            output_map[2 * i + 2], output_map[2 * i + 3] = running[0], running[1]
            running = running[2:]
            nl.register_alias(f"V{i}", tuple(running))
        else:
            for k, w in enumerate(running):
                output_map[2 * i + 2 + k] = w
    nl.register_alias("P", tuple(output_map[pos] for pos in range(2 * n)))

    # phase 7: restore the input copies in row T_0
    for i in range(1, n):
        nl.add_gate("cx", a[i], copy_wire[i])

    # phase 8: release the partial-product ancillae.  Row T_1 is excluded:
    # its wires were overwritten by the first adder's sum and are now P bits.
    live: dict[tuple[int, int], PartialProduct] = {
        (r, c): e for r, c, e in grid.cells()
        if r != 1 and isinstance(e, PartialProduct)}
    log: list[UncomputeEvent] = []
    for r, c in uncompute_schedule(n):
        entry = live.pop((r, c), None)
        if entry is None:
            held = grid.entry(r, c) if r < grid.row_count and c < len(grid.rows[r]) else None
            log.append(UncomputeEvent(r, c, "skipped",
                                      f"scheduled cell holds {held!r}, no live AND"))
            continue
        build_uncompute_and(nl, a[entry.i], a[entry.j], cell_wires[(r, c)])
    order = {w: k for k, w in enumerate(pp_wire.values())}
    for (r, c), entry in sorted(live.items(),
                                key=lambda kv: -order[cell_wires[kv[0]]]):
        build_uncompute_and(nl, a[entry.i], a[entry.j], cell_wires[(r, c)])
        log.append(UncomputeEvent(r, c, "fallback",
                                  f"{entry.label()} released in reverse build order"))

    return SquarerCircuit(n, nl, grid, cell_wires, output_map, stages, log)


def output_bit_map(circuit: SquarerCircuit) -> dict[int, int]:
    """Output position -> wire, total over 0..2n-1.

    Position 0 aliases input wire a_0; position 1 is the dedicated zero
    wire; the rest are adder sum wires, each mapped exactly once.
    """
    return dict(circuit.output_map)
