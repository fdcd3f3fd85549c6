"""
JSON documents for matrices, paths, transition sequences, tilings, friezes
and dense tiling windows.  Integers are written as decimal strings; plain
JSON integers are accepted on input.
"""
from __future__ import annotations

import json
import re
from typing import Any, List, Literal, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, ValidationError
from typing_extensions import Annotated

from src.common.errors import CodecError
from src.common.friezes import Frieze
from src.common.linalg import IntMatrix
from src.common.paths import Closure, ClosureKind, Path, TransitionSequence
from src.common.tilings import Tiling

_INT = re.compile(r"^[+-]?\d+$")


def _to_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and _INT.match(value.strip()):
        return int(value.strip())
    raise ValueError(f"expected an integer or a decimal string, got {value!r}")


IntStr = Annotated[int, BeforeValidator(_to_int), PlainSerializer(str, return_type=str)]
Rows = List[List[IntStr]]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class MatrixModel(_Model):
    rows: Rows


class ClosureModel(_Model):
    kind: ClosureKind
    period: Optional[int] = None


class PathModel(_Model):
    k: int
    base_index: int
    columns: Rows
    closure: ClosureModel


class TransitionModel(_Model):
    base_index: int
    closure: ClosureModel
    coeffs: Rows


class TilingModel(_Model):
    k: int
    central: Rows
    row_transitions: TransitionModel
    col_transitions: TransitionModel


class FriezeModel(_Model):
    """`width` is "infinite" when n is absent; a non-periodic infinite frieze starts at base <= 2-k."""
    k: int
    width: Union[int, Literal["infinite"]]
    n: Optional[int] = None
    base: int = 1
    period: Optional[int] = None
    rows: Rows


class WindowModel(_Model):
    k: int
    i0: int = 1
    j0: int = 1
    rows: Rows


M = TypeVar("M", bound=_Model)


def _validate(model: Type[M], data: Any) -> M:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise CodecError(f"invalid {model.__name__[:-5].lower()} document: {exc.errors()[0]['msg']} "
                         f"at {'.'.join(str(x) for x in exc.errors()[0]['loc'])}") from exc


def _closure(m: ClosureModel) -> Closure:
    return Closure(m.kind, m.period)


def _closure_model(c: Closure) -> ClosureModel:
    return ClosureModel(kind=c.kind, period=c.period)


# ---- encoders ----
def matrix_model(a: IntMatrix) -> MatrixModel:
    return MatrixModel(rows=a.to_lists())


def path_model(gamma: Path) -> PathModel:
    return PathModel(k=gamma.k, base_index=gamma.base_index, columns=[list(c) for c in gamma.columns],
                     closure=_closure_model(gamma.closure))


def transition_model(seq: TransitionSequence) -> TransitionModel:
    closure = Closure.finite() if seq.period is None else Closure.periodic(seq.period)
    return TransitionModel(base_index=seq.base_index, closure=_closure_model(closure),
                           coeffs=[list(c) for c in seq.coeffs])


def tiling_model(t: Tiling) -> TilingModel:
    return TilingModel(k=t.k, central=t.central.to_lists(), row_transitions=transition_model(t.row_transitions),
                       col_transitions=transition_model(t.col_transitions))


def frieze_model(f: Frieze) -> FriezeModel:
    return FriezeModel(k=f.k, width=f.width, n=f.n, base=f.base, period=f.period, rows=[list(r) for r in f.rows])


def window_model(k: int, grid: IntMatrix, i0: int, j0: int) -> WindowModel:
    return WindowModel(k=k, i0=i0, j0=j0, rows=grid.to_lists())


def encode(obj: Any) -> Any:
    """JSON-ready data for a domain object; containers are encoded item by item."""
    if isinstance(obj, _Model):
        return obj.model_dump(mode="json")
    if isinstance(obj, Path):
        return encode(path_model(obj))
    if isinstance(obj, Tiling):
        return encode(tiling_model(obj))
    if isinstance(obj, Frieze):
        return encode(frieze_model(obj))
    if isinstance(obj, TransitionSequence):
        return encode(transition_model(obj))
    if isinstance(obj, IntMatrix):
        return [[str(x) for x in row] for row in obj.rows]
    if isinstance(obj, dict):
        return {str(key): encode(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    raise CodecError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=indent)


# ---- decoders ----
def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodecError(f"not a JSON document: {exc}") from exc


def read_document(path: str) -> Any:
    """Parsed JSON from a file; OSError is left to the caller."""
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def load_matrix(data: Any) -> IntMatrix:
    if isinstance(data, list):
        data = {"rows": data}
    return IntMatrix.of(_validate(MatrixModel, data).rows)


def load_path(data: Any) -> Path:
    m = _validate(PathModel, data)
    return Path(m.k, m.base_index, tuple(tuple(c) for c in m.columns), _closure(m.closure))


def load_transitions(data: Any, k: int) -> TransitionSequence:
    m = _validate(TransitionModel, data)
    if m.closure.kind is ClosureKind.SKEW_PERIODIC:
        raise CodecError("transition sequences are finite or periodic")
    return TransitionSequence(k, m.base_index, tuple(tuple(c) for c in m.coeffs), m.closure.period)


def load_tiling(data: Any) -> Tiling:
    m = _validate(TilingModel, data)
    rows = load_transitions(m.row_transitions.model_dump(mode="json"), m.k)
    cols = load_transitions(m.col_transitions.model_dump(mode="json"), m.k)
    return Tiling(m.k, IntMatrix.of(m.central), rows, cols)


def load_frieze(data: Any) -> Frieze:
    m = _validate(FriezeModel, data)
    f = Frieze(m.k, tuple(tuple(r) for r in m.rows), m.n, m.base, m.period)
    if f.width != m.width:
        raise CodecError(f"declared width {m.width} does not match type ({f.k},{f.n}) with width {f.width}")
    return f


def load_window(data: Any) -> Tuple[int, IntMatrix, int, int]:
    m = _validate(WindowModel, data)
    return m.k, IntMatrix.of(m.rows), m.i0, m.j0
