"""JSON literals for groups, forms, modules and maps, with field diagnostics."""

from .abelian import PGroup, Hom


class SchemaError(ValueError):
    """A JSON literal does not match the expected shape; ``path`` names the field."""

    def __init__(self, path, message):
        super().__init__("%s: %s" % (path or "<root>", message))
        self.path = path


def _require(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(path, "missing field %r" % key)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError("%s.%s" % (path, key) if path else key, "expected %s" % kind.__name__)
    return val


def _int_matrix(M, path, rows=None, cols=None):
    if not isinstance(M, list) or any(not isinstance(r, list) for r in M):
        raise SchemaError(path, "expected a list of integer rows")
    for i, r in enumerate(M):
        for j, x in enumerate(r):
            if not isinstance(x, int) or isinstance(x, bool):
                raise SchemaError("%s[%d][%d]" % (path, i, j), "expected an integer")
    if rows is not None and len(M) != rows:
        raise SchemaError(path, "expected %d rows, got %d" % (rows, len(M)))
    if cols is not None and any(len(r) != cols for r in M):
        raise SchemaError(path, "expected rows of length %d" % cols)
    return M


def group_from_literal(obj, path="group"):
    p = _require(obj, "p", path, int)
    exps = _require(obj, "exponents", path, list)
    try:
        return PGroup(p, exps)
    except (ValueError, TypeError) as e:
        raise SchemaError(path, str(e))


def hom_from_literal(M, source, target, path="matrix"):
    if isinstance(M, dict):
        M = _require(M, "matrix", path)
    if target.rank == 0:
        M = M or []
    _int_matrix(M, path, rows=target.rank, cols=None if target.rank == 0 else source.rank)
    try:
        return Hom(source, target, M)
    except ValueError as e:
        raise SchemaError(path, str(e))


def form_from_literal(obj, path="form"):
    from .linkform import LinkForm, FormError
    G = group_from_literal(_require(obj, "group", path), path + ".group")
    gram = _require(obj, "gram", path, list)
    try:
        return LinkForm(G, gram)
    except (FormError, ValueError, ZeroDivisionError, TypeError) as e:
        raise SchemaError(path + ".gram", str(e))


def module_from_literal(obj, path="module"):
    from .cpmod import CpModule, ModuleError
    G = group_from_literal(obj, path)
    Z = hom_from_literal(_require(obj, "zeta", path), G, G, path + ".zeta")
    try:
        return CpModule(G, Z)
    except ModuleError as e:
        raise SchemaError(path + ".zeta", str(e))
