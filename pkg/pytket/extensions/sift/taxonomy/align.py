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
Rule-based structural matcher: every structural field and the name of a
record are compared separately, and the scores are combined under a
:py:class:`WeightProfile`.
"""

import logging
from typing import List, Optional

import Levenshtein  # type: ignore
import numpy as np

from .model import Mapping, Taxonomy, TaxonRecord, WeightProfile

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.75

# Scores this close to the best one count as a tie.
TIE_TOLERANCE = 1e-12


def levenshtein(a: str, b: str) -> int:
    """Edit distance between ``a`` and ``b``: the least number of single
    character insertions, deletions and substitutions turning one into the
    other. Case sensitive, computed over code points."""
    return int(Levenshtein.distance(a, b))


def name_similarity(a: str, b: str) -> float:
    """Edit distance normalised by the longer name, as a similarity in
    ``[0, 1]``. Two empty names are identical."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def attribute_similarity(x: int, y: int) -> float:
    """Similarity of two non-negative counts: ``1`` when equal, otherwise one
    minus their difference relative to the larger."""
    if x == y:
        return 1.0
    return 1.0 - abs(x - y) / max(x, y)


def _combine(weights: WeightProfile, scores: List[float]) -> float:
    # sum(w * s) / sum(w) in attribute order: identical records give exactly 1.0
    normal = weights.normalized()
    total = 0.0
    for w, s in zip(normal.as_tuple(), scores):
        total += w * s
    return min(1.0, total / normal.total)


def record_similarity(
    r1: TaxonRecord, r2: TaxonRecord, w: Optional[WeightProfile] = None
) -> float:
    """Weighted mean of the five structural similarities and the name
    similarity of two annotated records.

    :param r1: record from the first taxonomy
    :type r1: TaxonRecord
    :param r2: record from the second taxonomy
    :type r2: TaxonRecord
    :param w: attribute weights, defaults to uniform
    :type w: Optional[WeightProfile], optional
    :return: similarity in ``[0, 1]``
    :rtype: float
    """
    weights = w or WeightProfile.uniform()
    scores = [attribute_similarity(x, y) for x, y in zip(r1.counts(), r2.counts())]
    scores.append(name_similarity(r1.name, r2.name))
    return _combine(weights, scores)


def similarity_matrix(
    t1: Taxonomy, t2: Taxonomy, w: Optional[WeightProfile] = None
) -> np.ndarray:
    """All pairwise :py:func:`record_similarity` values, shape
    ``(len(t1), len(t2))``.

    :raises NotAnnotated: either taxonomy has not been annotated
    """
    t1.require_annotated("similarity_matrix")
    t2.require_annotated("similarity_matrix")
    weights = (w or WeightProfile.uniform()).normalized()
    values = weights.as_tuple()

    a = np.array([r.counts() for r in t1], dtype=np.float64).reshape(len(t1), 5)
    b = np.array([r.counts() for r in t2], dtype=np.float64).reshape(len(t2), 5)
    total = np.zeros((len(t1), len(t2)))
    for k in range(5):
        x = a[:, k][:, None]
        y = b[:, k][None, :]
        larger = np.maximum(x, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            score = np.where(x == y, 1.0, 1.0 - np.abs(x - y) / larger)
        total += values[k] * score
    if values[5] > 0:
        names = np.array(
            [[name_similarity(r.name, s.name) for s in t2] for r in t1],
            dtype=np.float64,
        ).reshape(len(t1), len(t2))
        total += values[5] * names
    return np.minimum(total / weights.total, 1.0)


def align(
    t1: Taxonomy,
    t2: Taxonomy,
    w: Optional[WeightProfile] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> List[Mapping]:
    """Map each record of ``t1`` to its most similar record of ``t2``.

    Scores within :py:data:`TIE_TOLERANCE` of the best are tied. Ties go
    first to a record with exactly the same name, then to the earliest
    record of ``t2``. Only mappings scoring at least
    ``threshold`` are returned, in preorder of ``t1``. The matching is one
    way and need not be injective.

    :param t1: annotated source taxonomy
    :type t1: Taxonomy
    :param t2: annotated target taxonomy
    :type t2: Taxonomy
    :param w: attribute weights, defaults to uniform
    :type w: Optional[WeightProfile], optional
    :param threshold: minimum confidence, defaults to 0.75
    :type threshold: float, optional
    :raises NotAnnotated: either taxonomy has not been annotated
    :raises ValueError: threshold outside ``[0, 1]``
    :return: mappings with relation ``"="``
    :rtype: List[Mapping]
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"Threshold {threshold} is outside [0, 1]")
    t1.require_annotated("align")
    t2.require_annotated("align")
    if len(t1) == 0 or len(t2) == 0:
        return []

    scores = similarity_matrix(t1, t2, w)
    labels1, labels2 = t1.labels(), t2.labels()
    mappings = []
    for i, row in enumerate(scores):
        best = float(row.max())
        if best < threshold:
            continue
        candidates = np.flatnonzero(
            np.isclose(row, best, rtol=0.0, atol=TIE_TOLERANCE)
        )
        j = next(
            (int(c) for c in candidates if t2[int(c)].name == t1[i].name),
            int(candidates[0]),
        )
        mappings.append(
            Mapping(labels1[i], labels2[j], best, source=i, target=j)
        )
    logger.debug(
        "aligned %d of %d records at threshold %s", len(mappings), len(t1), threshold
    )
    return mappings
