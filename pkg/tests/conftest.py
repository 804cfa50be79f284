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

from pathlib import Path

import pytest

from pytket.config import PytketConfig, get_config_file_path
from pytket.extensions.sift.taxonomy import Taxonomy, annotate


DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture()
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    # Keep the pytket config file (and with it the sift defaults) out of the
    # user's home directory.
    config_home = tmp_path / "config"
    config_home.mkdir()
    monkeypatch.setenv("XDG_CONFIG_HOME", str(config_home))
    monkeypatch.setenv("HOME", str(tmp_path))
    # pytket writes a default config file when first imported; recreate it at
    # the redirected location.
    PytketConfig.default().write_file(get_config_file_path())
    return config_home


@pytest.fixture()
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def t1() -> Taxonomy:
    # A
    #   B
    #     D
    #     E
    #   C
    #     F
    return Taxonomy.from_pairs(
        [(0, "A"), (1, "B"), (2, "D"), (2, "E"), (1, "C"), (2, "F")]
    )


@pytest.fixture()
def t1_annotated(t1: Taxonomy) -> Taxonomy:
    return annotate(t1)
