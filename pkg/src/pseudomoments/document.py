"""JSON interchange format for certificates.

Every scalar is a string (``"p/q"``, or ``"p/q + r/s*sqrt2"`` where
Q(sqrt 2) values are allowed), so a document round-trips bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .exactnum import QuadExt, format_scalar, parse_rational, parse_scalar
from .forms import FORM_IDS, Form, format_form, named_form, parse_form
from .moments import PseudoMomentVector
from .symmetry import PARAM_NAMES, OrbitParams, form_space, orbit_embed

ENCODINGS = ("orbit", "dense")
_KEYS = {"form", "n", "degree", "encoding", "orbit", "moments", "metadata"}


class DocumentError(ValueError):
    pass


@dataclass
class CertificateDocument:
    form: str
    n: int
    degree: int
    encoding: str
    orbit: Optional[dict] = None
    moments: Optional[dict] = None
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"form": self.form, "n": self.n, "degree": self.degree, "encoding": self.encoding}
        if self.encoding == "orbit":
            out["orbit"] = {k: format_scalar(v) for k, v in self.orbit.items()}
        else:
            out["moments"] = [
                {"exponent": list(a), "value": format_scalar(v)} for a, v in self.moments.items()
            ]
        out["metadata"] = self.metadata
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def form_object(self) -> Form:
        if self.form in FORM_IDS:
            return named_form(self.form)
        return parse_form(self.form, self.n)

    @property
    def form_id(self) -> Optional[str]:
        return self.form if self.form in FORM_IDS else None

    def params(self) -> Optional[OrbitParams]:
        if self.encoding != "orbit":
            return None
        return OrbitParams(self.form, tuple(self.orbit[k] for k in PARAM_NAMES[self.form]))

    def vector(self) -> PseudoMomentVector:
        if self.encoding == "orbit":
            return orbit_embed(self.params())
        return PseudoMomentVector.from_dict(self.form_object().space, self.moments)

    def is_rational(self) -> bool:
        vals = self.orbit.values() if self.encoding == "orbit" else self.moments.values()
        return not any(isinstance(v, QuadExt) and v.surd for v in vals)


def document_from_params(params: OrbitParams, metadata: Optional[dict] = None) -> CertificateDocument:
    space = form_space(params.form_id)
    return CertificateDocument(
        params.form_id, space.n, space.deg, "orbit", orbit=params.as_dict(), metadata=dict(metadata or {})
    )


def document_from_vector(form: Form, y: PseudoMomentVector, metadata: Optional[dict] = None) -> CertificateDocument:
    from .forms import identify_form

    name = identify_form(form) or format_form(form)
    return CertificateDocument(
        name, y.space.n, y.space.deg, "dense", moments=y.to_dict(), metadata=dict(metadata or {})
    )


def _scalar(text, allow_quadext: bool, where: str):
    if not isinstance(text, str):
        raise DocumentError(f"{where}: scalars must be strings, got {type(text).__name__}")
    try:
        return parse_scalar(text) if allow_quadext else parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _int(obj, key):
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise DocumentError(f"{key!r} must be a nonnegative integer")
    return v


def document_from_json(obj, allow_quadext: bool = False) -> CertificateDocument:
    """Validate a decoded JSON object and build the document."""
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    extra = set(obj) - _KEYS
    if extra:
        raise DocumentError(f"unknown keys: {', '.join(sorted(extra))}")
    form = obj.get("form")
    if not isinstance(form, str) or not form:
        raise DocumentError("'form' must be a form name or literal")
    n, degree = _int(obj, "n"), _int(obj, "degree")
    encoding = obj.get("encoding")
    if encoding not in ENCODINGS:
        raise DocumentError(f"'encoding' must be one of {ENCODINGS}")
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("'metadata' must be an object")

    try:
        p = named_form(form) if form in FORM_IDS else parse_form(form, n)
    except ValueError as exc:
        raise DocumentError(f"bad form: {exc}") from None
    if (p.space.n, p.space.deg) != (n, degree):
        raise DocumentError(f"form lives in n={p.space.n}, degree={p.space.deg}; document says n={n}, degree={degree}")

    doc = CertificateDocument(form, n, degree, encoding, metadata=metadata)
    if encoding == "orbit":
        if "moments" in obj:
            raise DocumentError("orbit documents carry no 'moments'")
        if form not in FORM_IDS:
            raise DocumentError("orbit encoding needs a named form")
        orbit = obj.get("orbit")
        names = PARAM_NAMES[form]
        if not isinstance(orbit, dict) or set(orbit) != set(names):
            raise DocumentError(f"'orbit' must give exactly {', '.join(names)}")
        doc.orbit = {k: _scalar(orbit[k], allow_quadext, f"orbit.{k}") for k in names}
    else:
        if "orbit" in obj:
            raise DocumentError("dense documents carry no 'orbit'")
        entries = obj.get("moments")
        if not isinstance(entries, list):
            raise DocumentError("'moments' must be a list")
        moments = {}
        for k, ent in enumerate(entries):
            if not isinstance(ent, dict) or set(ent) != {"exponent", "value"}:
                raise DocumentError(f"moments[{k}] needs exactly 'exponent' and 'value'")
            alpha = ent["exponent"]
            if not isinstance(alpha, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in alpha):
                raise DocumentError(f"moments[{k}].exponent must be an integer list")
            alpha = tuple(alpha)
            if alpha not in p.space:
                raise DocumentError(f"moments[{k}].exponent {list(alpha)} is not a degree-{degree} exponent in {n} variables")
            if alpha in moments:
                raise DocumentError(f"exponent {list(alpha)} listed twice")
            moments[alpha] = _scalar(ent["value"], allow_quadext, f"moments[{k}].value")
        doc.moments = moments
    return doc


def loads_document(text: str, allow_quadext: bool = False) -> CertificateDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return document_from_json(obj, allow_quadext)


def load_document(path, allow_quadext: bool = False) -> CertificateDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads_document(text, allow_quadext)
