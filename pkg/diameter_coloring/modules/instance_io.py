"""
Text format for instances.

Lines::

    c <comment>
    p col <n> <m>
    e <u> <v>                 1-based vertex ids
    l <v> <c1> [<c2> ...]     list of v; vertices without one get the full list
    t <k>                     opens the target section of a homomorphism file
    e <x> <y>                 target edge inside the section, loops allowed

List colors are 1..3 for coloring files and 1-based target vertices for
homomorphism files.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Union

from ..core.graph import Graph, GraphBuilder, iter_bits
from ..core.instance import FULL_LIST, ColoringInstance, ListAssignment
from ..exceptions import ArgumentError, ParseError
from .homomorphism import HomInstance, TargetGraph

logger = logging.getLogger(__name__)

Instance = Union[ColoringInstance, HomInstance]


@dataclass
class ParseResult:
    """A parsed instance plus the warnings raised while reading it."""

    instance: Instance
    warnings: List[str] = field(default_factory=list)


def _int(token: str, line_number: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got '{token}'", line_number) from None


def _vertex(token: str, count: int, line_number: int) -> int:
    value = _int(token, line_number, "Vertex id")
    if not 1 <= value <= count:
        raise ParseError(f"Vertex id {value} out of range 1..{count}", line_number)
    return value - 1


class _Reader:
    def __init__(self, target: Optional[TargetGraph]):
        self.target = target
        self.vertex_count: Optional[int] = None
        self.declared_edges = 0
        self.builder: Optional[GraphBuilder] = None
        self.lists: Dict[int, Set[int]] = {}
        self.list_lines: Dict[int, int] = {}
        self.target_size: Optional[int] = None
        self.target_builder: Optional[GraphBuilder] = None
        self.warnings: List[str] = []

    def warn(self, message: str, line_number: Optional[int] = None) -> None:
        text = message if line_number is None else f"line {line_number}: {message}"
        logger.warning(text)
        self.warnings.append(text)

    def feed(self, line_number: int, tokens: List[str]) -> None:
        kind, args = tokens[0], tokens[1:]
        if kind == "c":
            return
        if kind == "p":
            self._header(line_number, args)
        elif kind == "t":
            self._target_header(line_number, args)
        elif kind == "e":
            self._edge(line_number, args)
        elif kind == "l":
            self._list(line_number, args)
        else:
            raise ParseError(f"Unknown line type '{kind}'", line_number)

    def _header(self, line_number: int, args: List[str]) -> None:
        if self.vertex_count is not None:
            raise ParseError("Duplicate 'p' line", line_number)
        if len(args) != 3 or args[0] != "col":
            raise ParseError("Expected 'p col <n> <m>'", line_number)
        n = _int(args[1], line_number, "Vertex count")
        m = _int(args[2], line_number, "Edge count")
        if n < 0 or m < 0:
            raise ParseError("Counts must be non-negative", line_number)
        self.vertex_count = n
        self.declared_edges = m
        self.builder = GraphBuilder(n)

    def _target_header(self, line_number: int, args: List[str]) -> None:
        if self.builder is None:
            raise ParseError("'t' line before the 'p' line", line_number)
        if self.target_builder is not None:
            raise ParseError("Duplicate 't' line", line_number)
        if len(args) != 1:
            raise ParseError("Expected 't <k>'", line_number)
        k = _int(args[0], line_number, "Target size")
        if k < 1:
            raise ParseError("Target size must be positive", line_number)
        self.target_size = k
        self.target_builder = GraphBuilder(k, allows_loops=True)

    def _edge(self, line_number: int, args: List[str]) -> None:
        if self.builder is None:
            raise ParseError("'e' line before the 'p' line", line_number)
        if len(args) != 2:
            raise ParseError("Expected 'e <u> <v>'", line_number)
        if self.target_builder is not None:
            k = self.target_size or 0
            x, y = _vertex(args[0], k, line_number), _vertex(args[1], k, line_number)
            if not self.target_builder.add_edge(x, y):
                self.warn(f"Duplicate target edge {x + 1}-{y + 1} ignored", line_number)
            return
        n = self.vertex_count or 0
        u, v = _vertex(args[0], n, line_number), _vertex(args[1], n, line_number)
        if u == v:
            raise ParseError(f"Loop at vertex {u + 1} outside a target section", line_number)
        if not self.builder.add_edge(u, v):
            self.warn(f"Duplicate edge {u + 1}-{v + 1} ignored", line_number)

    def _list(self, line_number: int, args: List[str]) -> None:
        if self.builder is None:
            raise ParseError("'l' line before the 'p' line", line_number)
        if self.target_builder is not None:
            raise ParseError("'l' line inside the target section", line_number)
        if not args:
            raise ParseError("Expected 'l <v> <c1> ...'", line_number)
        v = _vertex(args[0], self.vertex_count or 0, line_number)
        colors = [_int(token, line_number, "Color") for token in args[1:]]
        if not colors:
            raise ParseError(f"Empty list for vertex {v + 1}", line_number)
        if v in self.lists:
            raise ParseError(f"Second list for vertex {v + 1}", line_number)
        self.lists[v] = set(colors)
        self.list_lines[v] = line_number

    def finish(self) -> ParseResult:
        if self.builder is None:
            raise ParseError("Missing 'p col <n> <m>' line")
        graph = self.builder.build()
        if graph.edge_count != self.declared_edges:
            self.warn(
                f"Header declares {self.declared_edges} edges, found {graph.edge_count}"
            )
        target = self.target
        if self.target_builder is not None:
            target = TargetGraph(self.target_builder.build())
        if target is None:
            return ParseResult(self._coloring(graph), self.warnings)
        return ParseResult(self._hom(graph, target), self.warnings)

    def _coloring(self, graph: Graph) -> ColoringInstance:
        masks = [FULL_LIST] * graph.vertex_count
        for v, colors in self.lists.items():
            bad = sorted(c for c in colors if c not in (1, 2, 3))
            if bad:
                raise ParseError(f"Colors {bad} outside 1..3", self.list_lines[v])
            masks[v] = sum(1 << c for c in colors)
        return ColoringInstance(graph, ListAssignment(masks))

    def _hom(self, graph: Graph, target: TargetGraph) -> HomInstance:
        k = target.vertex_count
        masks = [(1 << k) - 1] * graph.vertex_count
        for v, colors in self.lists.items():
            bad = sorted(c for c in colors if not 1 <= c <= k)
            if bad:
                raise ParseError(f"Target vertices {bad} outside 1..{k}", self.list_lines[v])
            masks[v] = sum(1 << (c - 1) for c in colors)
        return HomInstance(graph, target, ListAssignment(masks))


def parse(text: str, target: Optional[TargetGraph] = None) -> ParseResult:
    """
    Parse an instance file.

    Args:
        text: File contents; LF or CRLF line ends, trailing whitespace ignored
        target: Target for a homomorphism instance when the file has no
            target section; a target section in the file takes precedence

    Returns:
        ParseResult holding a ColoringInstance, or a HomInstance when a target
        is present.

    Raises:
        ParseError: For malformed lines, out-of-range ids or empty lists
    """
    reader = _Reader(target)
    for line_number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        try:
            reader.feed(line_number, tokens)
        except ArgumentError as e:
            raise ParseError(str(e), line_number) from e
    return reader.finish()


def serialize(inst: Instance, comment: Optional[str] = None) -> str:
    """
    Write ``inst`` in the text format.

    Edges are listed with ``u < v`` in increasing order and only lists that
    differ from the full palette are written.
    """
    lines = []
    if comment:
        lines.extend(f"c {line}" for line in comment.splitlines())
    graph = inst.graph
    lines.append(f"p col {graph.vertex_count} {graph.edge_count}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges())
    is_hom = isinstance(inst, HomInstance)
    for v, mask in enumerate(inst.lists.masks()):
        if mask == inst.palette:
            continue
        colors = [c + 1 for c in iter_bits(mask)] if is_hom else list(iter_bits(mask))
        lines.append(f"l {v + 1} " + " ".join(str(c) for c in colors))
    if is_hom:
        target = inst.target.graph
        lines.append(f"t {target.vertex_count}")
        lines.extend(f"e {x + 1} {y + 1}" for x, y in target.edges())
    return "\n".join(lines) + "\n"
