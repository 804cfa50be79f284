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

"""Structural annotation of a record sequence, and the analyses built on it."""

import logging
from typing import List

import numpy as np

from .model import Taxonomy, TaxonRecord

logger = logging.getLogger(__name__)


def _first(mask: np.ndarray, default: int) -> int:
    hits = np.flatnonzero(mask)
    return int(hits[0]) if hits.size else default


def _last(mask: np.ndarray, default: int) -> int:
    hits = np.flatnonzero(mask)
    return int(hits[-1]) if hits.size else default


def annotate(t: Taxonomy) -> Taxonomy:
    """Fill in the structural counts of every record.

    For a record ``i`` at depth ``d``:

    * ``same_level`` counts the other records at depth ``d`` anywhere in the
      sequence.
    * The sibling window of ``i`` is the largest contiguous range around it
      that holds no record shallower than ``d``. Only an outer taxon breaks a
      chain of brothers; deeper records inside the window do not.
      ``brothers`` counts the other depth-``d`` records in the window and
      ``brothers_left`` those of them that come before ``i``.
    * ``children`` counts the depth ``d + 1`` records that follow ``i``
      before the next record at depth ``d`` or shallower.

    Each record costs one scan in each direction, so the pass is quadratic in
    the worst case (a single deep chain) and close to linear for bushy
    taxonomies.

    :param t: taxonomy, annotated or not
    :type t: Taxonomy
    :return: a new, annotated taxonomy with the same depths and names
    :rtype: Taxonomy
    """
    n = len(t)
    if n == 0:
        return Taxonomy((), annotated=True)
    depths = np.fromiter((r.depth for r in t), dtype=np.int64, count=n)
    per_depth = np.bincount(depths)

    records: List[TaxonRecord] = []
    for i, record in enumerate(t):
        d = record.depth
        before = depths[:i]
        after = depths[i + 1 :]

        start = _last(before < d, -1) + 1
        end = i + 1 + _first(after < d, after.size)
        brothers_left = int(np.count_nonzero(before[start:] == d))
        brothers = brothers_left + int(np.count_nonzero(depths[i + 1 : end] == d))

        subtree_end = i + 1 + _first(after <= d, after.size)
        children = int(np.count_nonzero(depths[i + 1 : subtree_end] == d + 1))

        records.append(
            TaxonRecord(
                depth=d,
                children=children,
                brothers=brothers,
                brothers_left=brothers_left,
                same_level=int(per_depth[d]) - 1,
                name=record.name,
            )
        )
    logger.debug("annotated %d records", n)
    return Taxonomy(tuple(records), annotated=True)


def deepest_count(t: Taxonomy) -> int:
    """Number of records at the maximum depth present (``0`` when empty).

    Records above the maximum depth that have no children are not counted;
    see :py:func:`terminal_count` for those.
    """
    if len(t) == 0:
        return 0
    deepest = t.max_depth
    return sum(1 for r in t if r.depth == deepest)


def terminal_count(t: Taxonomy) -> int:
    """Number of records without children.

    :raises NotAnnotated: ``t`` has not been annotated
    """
    t.require_annotated("terminal_count")
    return sum(1 for r in t if r.children == 0)


def structural_index(t: Taxonomy) -> int:
    """Sum of the five structural fields over all records.

    A coarse fingerprint of the shape of a taxonomy: it ignores names and is
    unchanged by reordering sibling subtrees.

    :raises NotAnnotated: ``t`` has not been annotated
    """
    t.require_annotated("structural_index")
    return sum(sum(r.counts()) for r in t)


def index_similarity(i1: int, i2: int) -> float:
    """Ratio of the smaller to the larger structural index.

    Equal indexes (including two zeros) give ``1.0``.
    """
    if i1 < 0 or i2 < 0:
        raise ValueError("Structural indexes are non-negative")
    if i1 == i2:
        return 1.0
    return min(i1, i2) / max(i1, i2)
