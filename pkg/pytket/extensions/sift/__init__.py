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

"""Structural information extraction and structural alignment for taxonomies
"""

# _metadata.py is copied to the folder after installation.
from ._metadata import __extension_version__, __extension_name__  # type: ignore
from .taxonomy import (
    TaxonRecord,
    Taxonomy,
    KnowledgeGraph,
    Mapping,
    WeightProfile,
    new_record,
    parse_indented,
    parse_edge_list,
    parse_table,
    parse_json_table,
    directory_to_taxonomy,
    find_roots,
    graph_to_taxonomy,
    annotate,
    deepest_count,
    terminal_count,
    structural_index,
    index_similarity,
    levenshtein,
    name_similarity,
    attribute_similarity,
    record_similarity,
    similarity_matrix,
    align,
    SiftConfig,
    set_sift_config,
)
