import dataclasses
import hashlib
import json
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from kicked_harper.models import RunReport


def jsonable(obj: Any) -> Any:
    """Plain JSON types for dataclasses, enums, complex numbers and numpy values."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def build_report(
    command: str,
    config: BaseModel,
    result: Any,
    exit_code: int = 0,
    files: Optional[list] = None,
) -> RunReport:
    # output locations and worker counts never change results
    echo = config.model_dump(mode="json", exclude={"prefix", "threads", "log_level", "format", "verify"})
    return RunReport(
        command=command,
        config=echo,
        config_hash=config_hash({"command": command, **echo}),
        result=jsonable(result),
        exit_code=exit_code,
        files=list(files or []),
    )
