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
Command line front end: ``sift analyze | leaves | index | compare | align``.

Data goes to the output stream (or ``--output``); warnings and errors go to
standard error. Exit status is 0 on success, 1 for bad input or options and
2 for anything unexpected.
"""

import argparse
from contextlib import contextmanager
import json
import logging
from pathlib import Path
import sys
from typing import Iterator, List, NoReturn, Optional, Sequence, TextIO
import warnings

from ._metadata import __extension_version__  # type: ignore
from .taxonomy.align import DEFAULT_THRESHOLD, align
from .taxonomy.analysis import (
    annotate,
    deepest_count,
    index_similarity,
    structural_index,
    terminal_count,
)
from .taxonomy.config import SiftConfig
from .taxonomy.ingest import (
    NoRootInComponent,
    TaxonomyParseError,
    UnknownRoot,
    directory_to_taxonomy,
    graph_to_taxonomy,
    indent_unit,
    parse_edge_list,
    parse_indented,
    parse_json_table,
    parse_table,
)
from .taxonomy.model import (
    RECORD_FIELDS,
    InvalidTaxonomy,
    InvalidWeightProfile,
    Mapping,
    Taxonomy,
    WeightProfile,
)

logger = logging.getLogger(__name__)

FORMATS = ("indented", "edges", "table", "json", "dir")


class CliError(Exception):
    pass


# Errors caused by the input or the options, reported with exit status 1.
_INPUT_ERRORS = (
    CliError,
    TaxonomyParseError,
    NoRootInComponent,
    UnknownRoot,
    InvalidTaxonomy,
    InvalidWeightProfile,
    UnicodeDecodeError,
    OSError,
)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise CliError(message)


def format_table(t: Taxonomy, header: bool = False) -> str:
    """Record table as TSV, one row per record, LF line endings."""
    rows = ["\t".join(RECORD_FIELDS)] if header else []
    rows.extend("\t".join(str(v) for v in (*r.counts(), r.name)) for r in t)
    return "".join(row + "\n" for row in rows)


def format_json(t: Taxonomy) -> str:
    """Record table as a JSON array of objects keyed by the field names."""
    return json.dumps(t.to_dict(), indent=2, ensure_ascii=False) + "\n"


def format_mappings(mappings: Sequence[Mapping], header: bool = False) -> str:
    rows = ["c\tc'\tn\tR"] if header else []
    rows.extend(f"{m.c}\t{m.c_prime}\t{m.n:.4f}\t{m.relation}" for m in mappings)
    return "".join(row + "\n" for row in rows)


def format_mappings_json(mappings: Sequence[Mapping]) -> str:
    rows = [m.to_dict() for m in mappings]
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_taxonomy(path: str, args: argparse.Namespace, config: SiftConfig) -> Taxonomy:
    """Read ``path`` in the selected format and return it annotated."""
    if args.roots is not None and args.format != "edges":
        raise CliError("--roots only applies to --format edges")
    if args.format == "dir":
        return annotate(directory_to_taxonomy(path))
    text = _read_text(path)
    if args.format == "table":
        return parse_table(text)
    if args.format == "json":
        return parse_json_table(text)
    if args.format == "edges":
        roots = [r.strip() for r in args.roots.split(",")] if args.roots else None
        taxonomy, diagnostics = graph_to_taxonomy(parse_edge_list(text), roots)
        logger.debug("roots: %s", ", ".join(diagnostics.root_names))
        return annotate(taxonomy)
    try:
        unit = indent_unit(args.indent or config.indent or "tab")
    except ValueError as e:
        raise CliError(str(e))
    return annotate(parse_indented(text, unit))


@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fp:
            yield fp


def cmd_analyze(args: argparse.Namespace, config: SiftConfig) -> int:
    taxonomy = load_taxonomy(args.input, args, config)
    text = format_json(taxonomy) if args.json else format_table(taxonomy, args.header)
    with _output(args.output) as out:
        out.write(text)
    return 0


def cmd_leaves(args: argparse.Namespace, config: SiftConfig) -> int:
    taxonomy = load_taxonomy(args.input, args, config)
    with _output(args.output) as out:
        out.write(f"deepest: {deepest_count(taxonomy)}\n")
        out.write(f"terminal: {terminal_count(taxonomy)}\n")
    return 0


def cmd_index(args: argparse.Namespace, config: SiftConfig) -> int:
    taxonomy = load_taxonomy(args.input, args, config)
    with _output(args.output) as out:
        out.write(f"{structural_index(taxonomy)}\n")
    return 0


def cmd_compare(args: argparse.Namespace, config: SiftConfig) -> int:
    index_a = structural_index(load_taxonomy(args.input_a, args, config))
    index_b = structural_index(load_taxonomy(args.input_b, args, config))
    with _output(args.output) as out:
        out.write(f"index_a: {index_a}\n")
        out.write(f"index_b: {index_b}\n")
        out.write(f"similarity: {index_similarity(index_a, index_b):.4f}\n")
    return 0


def cmd_align(args: argparse.Namespace, config: SiftConfig) -> int:
    threshold = args.threshold
    if threshold is None:
        threshold = DEFAULT_THRESHOLD if config.threshold is None else config.threshold
    if not 0.0 <= threshold <= 1.0:
        raise CliError(f"threshold {threshold} is outside [0, 1]")
    if args.weights is not None:
        weights = WeightProfile.from_string(args.weights)
    else:
        weights = config.weight_profile() or WeightProfile.uniform()

    t1 = load_taxonomy(args.input_a, args, config)
    t2 = load_taxonomy(args.input_b, args, config)
    mappings = align(t1, t2, weights, threshold)
    if args.json:
        text = format_mappings_json(mappings)
    else:
        text = format_mappings(mappings, args.header)
    with _output(args.output) as out:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    inputs = _ArgumentParser(add_help=False)
    inputs.add_argument(
        "--format",
        choices=FORMATS,
        default="indented",
        help="input format (default: indented)",
    )
    inputs.add_argument(
        "--indent",
        default=None,
        help="indent unit of indented input: 'tab' or a number of spaces "
        "(default: tab)",
    )
    inputs.add_argument(
        "--roots",
        default=None,
        help="comma-separated concepts to start graph traversal from",
    )
    inputs.add_argument(
        "--output", default=None, help="write results here instead of stdout"
    )
    inputs.add_argument(
        "--verbose", action="store_true", help="log debug information to stderr"
    )

    parser = _ArgumentParser(
        prog="sift",
        description="Extract structural information from taxonomies.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__extension_version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser(
        "analyze", parents=[inputs], help="write the annotated record table"
    )
    analyze.add_argument("input")
    analyze.add_argument("--json", action="store_true", help="write JSON, not TSV")
    analyze.add_argument("--header", action="store_true", help="write a header row")
    analyze.set_defaults(handler=cmd_analyze)

    leaves = commands.add_parser(
        "leaves", parents=[inputs], help="count deepest and terminal taxons"
    )
    leaves.add_argument("input")
    leaves.set_defaults(handler=cmd_leaves)

    index = commands.add_parser(
        "index", parents=[inputs], help="print the structural index"
    )
    index.add_argument("input")
    index.set_defaults(handler=cmd_index)

    compare = commands.add_parser(
        "compare", parents=[inputs], help="compare two structural indexes"
    )
    compare.add_argument("input_a")
    compare.add_argument("input_b")
    compare.set_defaults(handler=cmd_compare)

    align_cmd = commands.add_parser(
        "align", parents=[inputs], help="map concepts of A onto concepts of B"
    )
    align_cmd.add_argument("input_a")
    align_cmd.add_argument("input_b")
    align_cmd.add_argument(
        "--threshold",
        type=float,
        default=None,
        help=f"minimum confidence (default: {DEFAULT_THRESHOLD})",
    )
    align_cmd.add_argument(
        "--weights",
        default=None,
        help="six comma-separated weights for depth, children, brothers, "
        "brothersLeft, sameLevel, name (default: uniform)",
    )
    align_cmd.add_argument(
        "--json", action="store_true", help="write the mappings as JSON"
    )
    align_cmd.add_argument("--header", action="store_true", help="write a header row")
    align_cmd.set_defaults(handler=cmd_align)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    status = 0
    error = ""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            args = parser.parse_args(argv)
            if args.verbose:
                logging.basicConfig(
                    level=logging.DEBUG,
                    stream=sys.stderr,
                    format="%(name)s: %(message)s",
                )
            status = args.handler(args, SiftConfig.from_default_config_file())
        except _INPUT_ERRORS as e:
            status, error = 1, str(e)
        except Exception as e:  # pylint: disable=broad-except
            logger.debug("unexpected failure", exc_info=True)
            status, error = 2, f"internal error: {e}"
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if error:
        print(f"error: {error}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
