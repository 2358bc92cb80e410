"""
2-SAT solving and the encoding of two-color list problems into 2-CNF.

Satisfiability is decided on the implication graph: a formula is UNSAT iff
some variable shares a strongly connected component with its negation, and a
model sets each variable true iff its component comes later in topological
order than the component of its negation.
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from ..exceptions import ArgumentError, ContractViolation
from .graph import iter_bits, popcount
from .outcome import Coloring

if TYPE_CHECKING:
    from .instance import ColoringInstance, ListInstance

logger = logging.getLogger(__name__)

# (variable id, polarity); polarity True means the positive literal.
Literal = Tuple[int, bool]
Clause = Tuple[Literal, Literal]


def negate(literal: Literal) -> Literal:
    return literal[0], not literal[1]


@dataclass
class TwoCnf:
    """
    A 2-CNF formula.

    A unit clause is stored as a pair of identical literals.
    """

    variable_count: int = 0
    clauses: List[Clause] = field(default_factory=list)

    def new_variable(self) -> int:
        self.variable_count += 1
        return self.variable_count - 1

    def add_clause(self, first: Literal, second: Optional[Literal] = None) -> None:
        self.clauses.append((first, first if second is None else second))

    def validate(self) -> None:
        """
        Raises:
            ArgumentError: If a literal is malformed or names an unknown variable
        """
        for index, clause in enumerate(self.clauses):
            if len(clause) != 2:
                raise ArgumentError(f"Clause {index} does not have two literals")
            for literal in clause:
                if (
                    not isinstance(literal, tuple)
                    or len(literal) != 2
                    or not isinstance(literal[0], int)
                    or not isinstance(literal[1], bool)
                ):
                    raise ArgumentError(f"Malformed literal {literal!r} in clause {index}")
                if not 0 <= literal[0] < self.variable_count:
                    raise ArgumentError(
                        f"Literal {literal!r} in clause {index} names an unknown variable"
                    )

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        return all(
            assignment[a] == pa or assignment[b] == pb for (a, pa), (b, pb) in self.clauses
        )

    def to_dimacs(self, comment: Optional[str] = None) -> str:
        """Render the formula in DIMACS CNF with 1-based variables."""
        lines = []
        if comment:
            lines.extend(f"c {line}" for line in comment.splitlines())
        lines.append(f"p cnf {self.variable_count} {len(self.clauses)}")
        for first, second in self.clauses:
            literals = [first] if first == second else [first, second]
            rendered = [str(var + 1) if positive else str(-(var + 1)) for var, positive in literals]
            lines.append(" ".join(rendered) + " 0")
        return "\n".join(lines) + "\n"


def _node(literal: Literal) -> int:
    variable, positive = literal
    return 2 * variable + (0 if positive else 1)


def solve_2sat(formula: TwoCnf) -> Optional[List[bool]]:
    """
    Decide a 2-CNF formula in linear time.

    Returns:
        A satisfying assignment indexed by variable, or None if UNSAT.

    Raises:
        ArgumentError: If the formula contains a malformed literal
    """
    formula.validate()
    implications = nx.DiGraph()
    implications.add_nodes_from(range(2 * formula.variable_count))
    for first, second in formula.clauses:
        implications.add_edge(_node(negate(first)), _node(second))
        implications.add_edge(_node(negate(second)), _node(first))

    condensed = nx.condensation(implications)
    component = condensed.graph["mapping"]
    position = {scc: index for index, scc in enumerate(nx.topological_sort(condensed))}

    assignment = []
    for variable in range(formula.variable_count):
        positive = component[2 * variable]
        negative = component[2 * variable + 1]
        if positive == negative:
            logger.debug(f"2-SAT: variable {variable} is equivalent to its negation")
            return None
        assignment.append(position[positive] > position[negative])
    return assignment


@dataclass(frozen=True)
class ListDecoding:
    """
    Maps a 2-SAT model back to a coloring.

    Attributes:
        fixed: Vertex -> color for singleton lists
        choices: Per variable, (vertex, color when false, color when true)
    """

    vertex_count: int
    fixed: Dict[int, int]
    choices: Tuple[Tuple[int, int, int], ...]

    def decode(self, assignment: Sequence[bool]) -> Coloring:
        colors: List[int] = [-1] * self.vertex_count
        for v, color in self.fixed.items():
            colors[v] = color
        for variable, (v, low, high) in enumerate(self.choices):
            colors[v] = high if assignment[variable] else low
        return tuple(colors)


class _ListEncoder:
    """One variable per two-color list; the smaller color is the false value."""

    def __init__(self, inst: "ListInstance"):
        self.formula = TwoCnf()
        self.fixed: Dict[int, int] = {}
        self.variables: Dict[int, int] = {}
        self.choices: List[Tuple[int, int, int]] = []
        self._falsum_added = False
        for v, mask in enumerate(inst.lists.masks()):
            size = popcount(mask)
            if size == 1:
                self.fixed[v] = mask.bit_length() - 1
            elif size == 2:
                low, high = iter_bits(mask)
                self.variables[v] = self.formula.new_variable()
                self.choices.append((v, low, high))
            else:
                raise ContractViolation(
                    f"Vertex {v} has a list of size {size}; expected 1 or 2"
                )

    def takes(self, v: int, color: int) -> Union[bool, Literal]:
        """The literal "v gets color", or True for a singleton list."""
        if v in self.fixed:
            return self.fixed[v] == color
        variable = self.variables[v]
        return variable, self.choices[variable][2] == color

    def forbid(self, u: int, color_u: int, v: int, color_v: int) -> None:
        first = self.takes(u, color_u)
        second = self.takes(v, color_v)
        if first is True and second is True:
            self._add_falsum()
        elif first is True:
            self.formula.add_clause(negate(second))  # type: ignore[arg-type]
        elif second is True:
            self.formula.add_clause(negate(first))  # type: ignore[arg-type]
        else:
            self.formula.add_clause(negate(first), negate(second))  # type: ignore[arg-type]

    def _add_falsum(self) -> None:
        if self._falsum_added:
            return
        variable = self.formula.new_variable()
        self.formula.add_clause((variable, True))
        self.formula.add_clause((variable, False))
        self._falsum_added = True

    def decoding(self, vertex_count: int) -> ListDecoding:
        return ListDecoding(vertex_count, dict(self.fixed), tuple(self.choices))


def encode_lists(inst: "ListInstance") -> Tuple[TwoCnf, ListDecoding]:
    """
    Encode an instance whose lists have one or two colors.

    For every edge ``uv`` and every color pair the compatibility table
    forbids, a clause rules out that pair.

    Raises:
        ContractViolation: If a list is empty or has more than two colors
    """
    encoder = _ListEncoder(inst)
    lists = inst.lists
    for u, v in inst.graph.edges():
        for color_u in iter_bits(lists[u]):
            for color_v in iter_bits(lists[v] & ~inst.compat[color_u]):
                encoder.forbid(u, color_u, v, color_v)
    formula = encoder.formula
    logger.debug(
        f"Encoded {inst.vertex_count} vertices into {formula.variable_count} "
        f"variables and {len(formula.clauses)} clauses"
    )
    return formula, encoder.decoding(inst.vertex_count)


def edwards_encode(inst: "ColoringInstance") -> Tuple[TwoCnf, ListDecoding]:
    """
    Encode List 3-Coloring with lists of size 1 or 2.

    For every edge ``uv`` and color ``c`` in both lists, the clause forbids
    both endpoints taking ``c``.
    """
    from .instance import ColoringInstance

    if not isinstance(inst, ColoringInstance):
        raise ArgumentError("edwards_encode expects a ColoringInstance")
    return encode_lists(inst)
