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

"""Taxonomy model, readers, structural analysis and alignment
"""

from .model import (
    TaxonRecord,
    Taxonomy,
    KnowledgeGraph,
    Mapping,
    WeightProfile,
    InvalidTaxonomy,
    InvalidWeightProfile,
    NotAnnotated,
    new_record,
)
from .ingest import (
    ParseDiagnostics,
    TaxonomyParseError,
    IndentJump,
    MixedIndent,
    FirstLineIndented,
    MalformedLine,
    NoRootInComponent,
    UnknownRoot,
    CycleCutWarning,
    RootOverrideWarning,
    indent_unit,
    parse_indented,
    parse_edge_list,
    parse_table,
    parse_json_table,
    directory_to_taxonomy,
    find_roots,
    graph_to_taxonomy,
)
from .analysis import (
    annotate,
    deepest_count,
    terminal_count,
    structural_index,
    index_similarity,
)
from .align import (
    levenshtein,
    name_similarity,
    attribute_similarity,
    record_similarity,
    similarity_matrix,
    align,
)
from .config import SiftConfig, set_sift_config
