"""Matrix files and canonical JSON output.

A matrix file is a JSON object ``{"dim": d, "kind": k, "re": [[...]], "im": [[...]]}``
with ``kind`` one of ``state``, ``witness`` or ``hermitian``. Output is
canonical: sorted keys, fixed separators and floats written with 17
significant digits, so writing a file that was read back is bit-exact.
"""
import dataclasses
import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..comparability import SimplexWeights
from ..errors import ParseError
from ..matcore import IncoherentState
from ..witness import CoherenceWitness

KINDS = ("state", "witness", "hermitian")
SPLIT_TOL = 1e-9


@dataclass(frozen=True)
class MatrixFile:
    kind: str
    matrix: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]

    def to_dict(self):
        return {"dim": self.dim, "kind": self.kind,
                "re": self.matrix.real.tolist(), "im": self.matrix.imag.tolist()}


def _float(x):
    x = float(x) + 0.0  # drops the sign of negative zero
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def _encode(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_jsonable(obj):
    """Plain JSON data for library results (dataclasses, enums, arrays)."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, CoherenceWitness):
        return {"re": obj.mat.real.tolist(), "im": obj.mat.imag.tolist(),
                "normalized": obj.normalized}
    if isinstance(obj, SimplexWeights):
        return obj.t.tolist()
    if isinstance(obj, IncoherentState):
        return obj.diag.tolist()
    if dataclasses.is_dataclass(obj):
        fields = [f.name for f in dataclasses.fields(obj)]
        return {name: to_jsonable(getattr(obj, name)) for name in fields}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return _encode(to_jsonable(obj)) + "\n"


def _square(rows, field, dim):
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"{field} must be a list of {dim} rows", field=field)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{field}[{i}] must have {dim} entries", field=f"{field}[{i}]")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"{field}[{i}][{j}] is not a number", field=f"{field}[{i}][{j}]")
    return np.array(rows, dtype=float)


def parse_matrix(data) -> MatrixFile:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", field="$")
    for key in ("dim", "kind", "re", "im"):
        if key not in data:
            raise ParseError(f"missing field {key!r}", field=key)
    dim, kind = data["dim"], data["kind"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
        raise ParseError("dim must be an integer >= 2", field="dim")
    if kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}", field="kind")
    re = _square(data["re"], "re", dim)
    im = _square(data["im"], "im", dim)
    if np.abs(re - re.T).max() > SPLIT_TOL:
        raise ParseError("re must be symmetric", field="re")
    if np.abs(im + im.T).max() > SPLIT_TOL:
        raise ParseError("im must be antisymmetric", field="im")
    mat = re + 1j * im
    return MatrixFile(kind, mat)


def loads(text) -> MatrixFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}", field="$")
    return parse_matrix(data)


def read_matrix_file(path) -> MatrixFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", field="$")
    return loads(text)


def write_matrix_file(path, mf: MatrixFile):
    Path(path).write_text(dumps(mf.to_dict()))
