"""
Reading and writing polynomials and reports as JSON.

BiPoly documents look like::

    {"n": 2,
     "terms": [{"alpha": [1, 0], "beta": [0, 1],
                "coef": {"re": "3/1", "im": "0/1"}}]}

Every rational is written as "num/den" in lowest terms, terms in canonical
order, so write(read(F)) reproduces a canonical file byte for byte.
"""
import io
import json
import logging
import os
import sys
from fractions import Fraction
from math import gcd

from .exceptions import SchemaError
from .poly import BiPoly
from .poly import exact
from .poly import rational_string

log = logging.getLogger(__name__)

ACCEPTED_EXTENSIONS = set(['.json'])


def _check_extension(path):
    (_, extension) = os.path.splitext(path)
    if extension.lower() not in ACCEPTED_EXTENSIONS:
        raise TypeError(
            "The file extension provided is not currently supported.")


def _parse_rational(text, pointer):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise SchemaError(pointer, "expected a rational string, got {!r}"
                          .format(text))
    text = str(text).strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(pointer, "'{}' is not a rational number".format(text))
    if '/' in text:
        num, den = (int(part) for part in text.split('/'))
        if den < 0 or gcd(num, den) != 1:
            log.warning("%s: fraction '%s' is not reduced; read as %s",
                        pointer, text, value)
    return value


def _parse_index(value, n, pointer):
    if not isinstance(value, list):
        raise SchemaError(pointer, "expected a list of {} integers".format(n))
    if len(value) != n:
        raise SchemaError(pointer, "expected {} entries, found {}"
                          .format(n, len(value)))
    for k, entry in enumerate(value):
        if isinstance(entry, bool) or not isinstance(entry, int) or entry < 0:
            raise SchemaError('{}/{}'.format(pointer, k),
                              "expected a non-negative integer, got {!r}"
                              .format(entry))
    return tuple(value)


def poly_from_dict(doc, pointer=''):
    """Validates a BiPoly document and builds the polynomial."""
    if not isinstance(doc, dict):
        raise SchemaError(pointer, "expected an object")
    n = doc.get('n')
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SchemaError(pointer + '/n', "expected a positive integer")
    terms = doc.get('terms')
    if not isinstance(terms, list):
        raise SchemaError(pointer + '/terms', "expected a list of terms")
    collected = {}
    for t, term in enumerate(terms):
        here = '{}/terms/{}'.format(pointer, t)
        if not isinstance(term, dict):
            raise SchemaError(here, "expected an object")
        for field in ('alpha', 'beta', 'coef'):
            if field not in term:
                raise SchemaError(here, "missing field '{}'".format(field))
        alpha = _parse_index(term['alpha'], n, here + '/alpha')
        beta = _parse_index(term['beta'], n, here + '/beta')
        coef = term['coef']
        if not isinstance(coef, dict):
            raise SchemaError(here + '/coef', "expected {\"re\": ..., \"im\": ...}")
        re = _parse_rational(coef.get('re', '0'), here + '/coef/re')
        im = _parse_rational(coef.get('im', '0'), here + '/coef/im')
        if (alpha, beta) in collected:
            raise SchemaError(here, "duplicate monomial {}".format((alpha, beta)))
        collected[(alpha, beta)] = exact(re, im)
    return BiPoly(n, collected)


def poly_to_dict(P):
    return {'n': P.n,
            'terms': [{'alpha': list(alpha),
                       'beta': list(beta),
                       'coef': {'re': rational_string(coef.x),
                                'im': rational_string(coef.y)}}
                      for (alpha, beta), coef in P.items()]}


def dumps(document):
    return json.dumps(document, indent=2) + '\n'


def read_poly(source):
    """Reads a BiPoly from a .json path, an open stream or a parsed dict."""
    if isinstance(source, dict):
        return poly_from_dict(source)
    if isinstance(source, (str, os.PathLike)):
        _check_extension(str(source))
        with open(source) as handle:
            text = handle.read()
    else:
        text = source.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise SchemaError('', "invalid JSON at line {}, column {}: {}".format(
            error.lineno, error.colno, error.msg))
    return poly_from_dict(document)


def write_poly(P, target=None):
    """Writes the canonical JSON of P to a path or stream; returns the text."""
    text = dumps(poly_to_dict(P))
    if target is None:
        return text
    if isinstance(target, (str, os.PathLike)):
        _check_extension(str(target))
        with open(target, 'w') as handle:
            handle.write(text)
    else:
        target.write(text)
    return text


def poly_io(source, direction='read', P=None):
    """read: returns the BiPoly stored at ``source``; write: stores P there."""
    if direction == 'read':
        return read_poly(source)
    if direction == 'write':
        return write_poly(P, source)
    raise ValueError("direction must be 'read' or 'write'")


def loads_poly(text):
    return read_poly(io.StringIO(text))


def write_report(report, out=None):
    """Writes a report dict as JSON to ``out`` or to stdout."""
    text = dumps(report)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w') as handle:
            handle.write(text)
    log.info("report written to %s", out or 'stdout')
    return text


def read_report(path):
    with open(path) as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as error:
            raise SchemaError('', "invalid JSON at line {}, column {}: {}"
                              .format(error.lineno, error.colno, error.msg))
