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

"""SIFT config."""

from typing import Any, Dict, List, Optional, Type, ClassVar
from dataclasses import dataclass
from pytket.config import PytketExtConfig

from .ingest import indent_unit
from .model import WeightProfile


@dataclass
class SiftConfig(PytketExtConfig):
    """Holds config parameters for pytket-sift."""

    ext_dict_key: ClassVar[str] = "sift"

    indent: Optional[str]
    threshold: Optional[float]
    weights: Optional[List[float]]

    @classmethod
    def from_extension_dict(
        cls: Type["SiftConfig"], ext_dict: Dict[str, Any]
    ) -> "SiftConfig":
        return cls(
            ext_dict.get("indent", None),
            ext_dict.get("threshold", None),
            ext_dict.get("weights", None),
        )

    def weight_profile(self) -> Optional[WeightProfile]:
        if self.weights is None:
            return None
        return WeightProfile.from_sequence(self.weights)


def set_sift_config(
    indent: Optional[str] = None,
    threshold: Optional[float] = None,
    weights: Optional[List[float]] = None,
) -> None:
    """Set default values for the indent unit, alignment threshold and
    attribute weights. Arguments left as None keep their stored value; each
    setting can be overriden on the command line."""
    if indent is not None:
        indent_unit(indent)
    if threshold is not None and not 0.0 <= threshold <= 1.0:
        raise ValueError(f"Threshold {threshold} is outside [0, 1]")
    if weights is not None:
        weights = list(WeightProfile.from_sequence(weights).as_tuple())
    sconfig = SiftConfig.from_default_config_file()
    if indent is not None:
        sconfig.indent = indent
    if threshold is not None:
        sconfig.threshold = threshold
    if weights is not None:
        sconfig.weights = weights
    sconfig.update_default_config_file()
