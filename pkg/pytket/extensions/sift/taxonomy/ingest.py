# Copyright 2020-2023 Cambridge Quantum Computing
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Readers for the supported input formats, and the conversion of a knowledge
graph into a taxonomy by rooted depth-first unfolding.
"""

from dataclasses import dataclass, field
import json
import logging
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Type, Union
import warnings

import networkx as nx  # type: ignore

from .analysis import annotate
from .model import (
    RECORD_FIELDS,
    InvalidTaxonomy,
    KnowledgeGraph,
    Taxonomy,
    TaxonRecord,
    new_record,
)

logger = logging.getLogger(__name__)

TAB = "\t"


@dataclass
class TaxonomyParseError(Exception):
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


class IndentJump(TaxonomyParseError):
    """A line is indented more than one level deeper than its predecessor."""


class MixedIndent(TaxonomyParseError):
    """Leading whitespace does not match the configured indent unit."""


class FirstLineIndented(TaxonomyParseError):
    """The first taxon of a file must sit at depth 0."""


class MalformedLine(TaxonomyParseError):
    """A line does not have the field layout of its format."""


@dataclass
class NoRootInComponent(Exception):
    """A connected component in which every concept has an ancestor."""

    member: str

    def __str__(self) -> str:
        return (
            f"component containing {self.member!r} has no concept without "
            "ancestors; name a starting concept with a root override"
        )


class UnknownRoot(ValueError):
    pass


class CycleCutWarning(UserWarning):
    pass


class RootOverrideWarning(UserWarning):
    pass


@dataclass
class ParseDiagnostics:
    """Side information collected while converting a graph.

    :param warnings: ``(line, message)`` pairs; line is ``0`` when the
        condition has no source line
    :param root_names: concepts the traversal started from, in order
    :param cut_edges: edges that were not followed because they close a cycle
    """

    warnings: List[Tuple[int, str]] = field(default_factory=list)
    root_names: List[str] = field(default_factory=list)
    cut_edges: List[Tuple[str, str]] = field(default_factory=list)

    def warn(self, line: int, message: str, category: Type[UserWarning]) -> None:
        self.warnings.append((line, message))
        text = f"line {line}: {message}" if line > 0 else message
        warnings.warn(text, category, stacklevel=3)


def indent_unit(setting: Union[str, int]) -> str:
    """Translate an indent setting (``"tab"`` or a space count) into the
    literal string making up one level of indentation."""
    if isinstance(setting, str):
        if setting.lower() == "tab":
            return TAB
        try:
            setting = int(setting)
        except ValueError:
            raise ValueError(
                f"Indent must be 'tab' or a number of spaces, got {setting!r}"
            )
    if setting < 1:
        raise ValueError(f"Indent width must be at least 1, got {setting}")
    return " " * setting


def _indent_depth(leading: str, unit: str, line: int) -> int:
    if unit == TAB:
        if " " in leading:
            raise MixedIndent(line, "space found in tab-indented line")
        return len(leading)
    if TAB in leading:
        raise MixedIndent(line, "tab found in space-indented line")
    if len(leading) % len(unit):
        raise MixedIndent(
            line,
            f"indent of {len(leading)} spaces is not a multiple of {len(unit)}",
        )
    return len(leading) // len(unit)


def _lines(source_text: str) -> Iterator[Tuple[int, str]]:
    """Numbered lines with line terminators and trailing blanks removed."""
    for number, line in enumerate(source_text.lstrip("\ufeff").split("\n"), 1):
        yield number, line.rstrip()


def parse_indented(source_text: str, indent: str = TAB) -> Taxonomy:
    """Read a taxonomy written one taxon per line, nesting given by indentation.

    :param source_text: file contents, LF or CRLF line endings
    :type source_text: str
    :param indent: literal string forming one indentation level, either a tab
        or a run of spaces (see :py:func:`indent_unit`), defaults to a tab
    :type indent: str
    :raises FirstLineIndented: the first taxon is indented
    :raises IndentJump: a taxon is more than one level deeper than the last
    :raises MixedIndent: leading whitespace does not fit ``indent``
    :return: unannotated taxonomy, one record per nonblank line
    :rtype: Taxonomy
    """
    if not indent or (indent != TAB and indent.strip(" ")):
        raise ValueError(f"Unsupported indent unit {indent!r}")
    records: List[TaxonRecord] = []
    previous: Optional[int] = None
    for line, text in _lines(source_text):
        if not text:
            continue
        name = text.lstrip(" \t")
        depth = _indent_depth(text[: len(text) - len(name)], indent, line)
        if previous is None and depth > 0:
            raise FirstLineIndented(line, f"first taxon {name!r} is indented")
        if previous is not None and depth > previous + 1:
            raise IndentJump(
                line,
                f"{name!r} is at depth {depth} but the previous taxon is at "
                f"depth {previous}",
            )
        records.append(new_record(depth, name))
        previous = depth
    return Taxonomy(tuple(records))


def parse_edge_list(source_text: str) -> KnowledgeGraph:
    """Read a graph given as ``parent<TAB>child`` lines.

    A line with a single name adds an isolated concept, lines starting with
    ``#`` are comments. Repeated edges collapse to one.

    :raises MalformedLine: more than two fields, or an empty field
    """
    graph = nx.DiGraph()
    for line, text in _lines(source_text):
        if not text.strip() or text.startswith("#"):
            continue
        fields = [f.strip() for f in text.split(TAB)]
        if len(fields) > 2:
            raise MalformedLine(
                line, f"expected 'parent<TAB>child', found {len(fields)} fields"
            )
        if not all(fields):
            raise MalformedLine(line, "empty concept name")
        if len(fields) == 1:
            graph.add_node(fields[0])
        elif not graph.has_edge(*fields):
            graph.add_edge(*fields, line=line)
    return KnowledgeGraph(graph)


def parse_table(source_text: str) -> Taxonomy:
    """Read back a TSV record table as written by ``sift analyze``.

    An optional header row is skipped. The counts are checked against the
    ones recomputed from the depths, and the result is marked annotated.

    :raises MalformedLine: a row without six fields, with a non-integer count,
        or with counts that do not fit the structure
    :raises InvalidTaxonomy: the depths break the taxonomy invariants
    """
    records: List[TaxonRecord] = []
    lines: List[int] = []
    for line, raw in enumerate(source_text.lstrip("\ufeff").split("\n"), 1):
        text = raw.rstrip("\r")
        if not text.strip():
            continue
        fields = text.split(TAB)
        if not records and fields[0] == RECORD_FIELDS[0]:
            continue
        if len(fields) != len(RECORD_FIELDS):
            raise MalformedLine(
                line,
                f"expected {len(RECORD_FIELDS)} tab-separated fields, "
                f"found {len(fields)}",
            )
        try:
            counts = [int(f) for f in fields[:-1]]
        except ValueError:
            raise MalformedLine(line, "structural fields must be integers")
        if any(c < 0 for c in counts):
            raise MalformedLine(line, "structural fields must be non-negative")
        try:
            records.append(TaxonRecord(*counts, name=fields[-1]))
        except InvalidTaxonomy as e:
            raise MalformedLine(line, str(e))
        lines.append(line)
    return _checked(records, lines)


def _checked(records: List[TaxonRecord], lines: List[int]) -> Taxonomy:
    """Mark a read-back table annotated once its counts match the ones
    recomputed from its depths."""
    stored = Taxonomy(tuple(records), annotated=True)
    for line, have, want in zip(lines, stored, annotate(stored)):
        if have != want:
            raise MalformedLine(
                line,
                f"counts {list(have.counts())} of {have.name!r} do not fit the "
                f"structure, expected {list(want.counts())}",
            )
    return stored


def parse_json_table(source_text: str) -> Taxonomy:
    """Read back a JSON record table as written by ``sift analyze --json``.

    Checked like :py:func:`parse_table`; errors cite the 1-based position
    of the record in the array as their line.
    """
    try:
        rows = json.loads(source_text) if source_text.strip() else []
    except json.JSONDecodeError as e:
        raise TaxonomyParseError(e.lineno, e.msg)
    if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
        raise TaxonomyParseError(1, "expected a JSON array of record objects")
    records: List[TaxonRecord] = []
    for index, row in enumerate(rows, 1):
        try:
            records.append(TaxonRecord.from_dict(row))
        except (TypeError, ValueError) as e:
            raise MalformedLine(index, str(e))
    return _checked(records, list(range(1, len(records) + 1)))


def directory_to_taxonomy(path: Union[str, Path]) -> Taxonomy:
    """Unfold a directory tree into a taxonomy.

    The directory itself is the root; entries are visited depth-first in name
    order. Symbolic links are listed but never followed.
    """
    root = Path(path)
    if not root.is_dir():
        raise NotADirectoryError(str(root))

    def entries(directory: Path) -> Iterator[Path]:
        return iter(sorted(directory.iterdir(), key=lambda p: p.name))

    records = [new_record(0, root.resolve().name or str(root))]
    stack = [entries(root)]
    while stack:
        entry = next(stack[-1], None)
        if entry is None:
            stack.pop()
            continue
        records.append(new_record(len(stack), entry.name))
        if entry.is_dir() and not entry.is_symlink():
            stack.append(entries(entry))
    return Taxonomy(tuple(records))


def _rootless_members(g: KnowledgeGraph, starts: Set[str]) -> List[str]:
    """One member (the first to appear) of every weakly connected component
    that contains none of ``starts``."""
    component_of: Dict[str, int] = {}
    for index, component in enumerate(nx.weakly_connected_components(g.graph)):
        for node in component:
            component_of[node] = index
    covered = {component_of[n] for n in starts}
    members = []
    for node in g.nodes:
        if component_of[node] not in covered:
            covered.add(component_of[node])
            members.append(node)
    return members


def find_roots(g: KnowledgeGraph) -> List[str]:
    """Concepts without ancestors, in first-appearance order.

    :raises NoRootInComponent: some component is a pure cycle
    """
    roots = [n for n in g.nodes if not g.has_parent(n)]
    rootless = _rootless_members(g, set(roots))
    if rootless:
        raise NoRootInComponent(rootless[0])
    return roots


def _unfold(
    g: KnowledgeGraph,
    root: str,
    records: List[TaxonRecord],
    diagnostics: ParseDiagnostics,
) -> None:
    # `path` holds the concepts on the current root-to-node path; a concept
    # leaves it again when its subtree is done, so shared sub-concepts are
    # revisited (and duplicated) along every distinct path.
    records.append(new_record(0, root))
    path = {root}
    stack = [(root, iter(g.children(root)))]
    while stack:
        node, pending = stack[-1]
        child = next(pending, None)
        if child is None:
            stack.pop()
            path.discard(node)
            continue
        if child in path:
            if (node, child) not in diagnostics.cut_edges:
                diagnostics.cut_edges.append((node, child))
                diagnostics.warn(
                    g.edge_line(node, child),
                    f"cycle cut: edge {node!r} -> {child!r} leads back to an "
                    "ancestor",
                    CycleCutWarning,
                )
            continue
        records.append(new_record(len(stack), child))
        path.add(child)
        stack.append((child, iter(g.children(child))))


def graph_to_taxonomy(
    g: KnowledgeGraph, root_overrides: Optional[Sequence[str]] = None
) -> Tuple[Taxonomy, ParseDiagnostics]:
    """Convert a knowledge graph into a taxonomy.

    Every root is visited depth-first, children in lexicographic order, each
    visit appending one record one level deeper than its parent. A concept
    already on the current path is not entered again (the edge is cut and
    reported); a concept reachable along several acyclic paths appears once
    per path.

    :param g: graph to convert
    :type g: KnowledgeGraph
    :param root_overrides: concepts to start from before the natural roots;
        needed when a component is a pure cycle, defaults to None
    :type root_overrides: Optional[Sequence[str]], optional
    :raises NoRootInComponent: a component has neither a natural root nor an
        override
    :raises UnknownRoot: an override names a concept that is not in ``g``
    :return: unannotated taxonomy and the conversion diagnostics
    :rtype: Tuple[Taxonomy, ParseDiagnostics]
    """
    diagnostics = ParseDiagnostics()
    if root_overrides:
        unknown = [r for r in root_overrides if r not in g]
        if unknown:
            raise UnknownRoot(f"Root override {unknown[0]!r} is not in the graph")
        natural = [n for n in g.nodes if not g.has_parent(n)]
        roots = list(dict.fromkeys([*root_overrides, *natural]))
        rootless = _rootless_members(g, set(roots))
        if rootless:
            raise NoRootInComponent(rootless[0])
        for name in dict.fromkeys(root_overrides):
            diagnostics.warn(
                0, f"root override: traversal starts at {name!r}", RootOverrideWarning
            )
    else:
        roots = find_roots(g)
    diagnostics.root_names = roots

    records: List[TaxonRecord] = []
    for root in roots:
        _unfold(g, root, records, diagnostics)
    logger.debug(
        "unfolded %d concepts from %d roots into %d records",
        len(g),
        len(roots),
        len(records),
    )
    return Taxonomy(tuple(records)), diagnostics
