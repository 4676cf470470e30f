"""
Configuration loading and plain-text parsing helpers shared by the library and the command line.

Functions:
    load_yaml(file_path) -> dict: Reads a YAML document with ``yaml.safe_load``.
    load_key_value_file(file_path) -> dict[str, str | float | int]: Reads a ``key=value`` configuration file.
    coerce_scalar(text) -> str | float | int: Converts a configuration token to the narrowest numeric type.
    parse_complex(text) -> complex: Parses ``1+2i``, ``1+2j``, ``-3`` or ``[1, 2]`` style complex literals.
    parse_poly_json(text) -> list[complex]: Decodes a degree-ascending coefficient array.
    poly_to_json(coeffs) -> bytes: Encodes coefficients as ``[re, im]`` pairs.
"""

import re
from fractions import Fraction
from typing import Iterable

import orjson
import yaml

from mu_bargmann.common.errors import DomainError

_COMPLEX_TOKEN = re.compile(r"^[0-9eE+\-.ij()]+$")


def load_yaml(file_path: str) -> dict:
    with open(file_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def coerce_scalar(text: str) -> str | float | int:
    """Converts a configuration token to int, float or leaves it as a string.

    Fractions such as ``2/3`` are accepted for the inverse-index style values used by region queries.

    Args:
        text (str): Raw token.

    Returns:
        str | float | int: The parsed value.
    """
    token = text.strip()
    for cast in (int, float):
        try:
            return cast(token)
        except ValueError:
            pass
    try:
        return float(Fraction(token))
    except (ValueError, ZeroDivisionError):
        return token


def load_key_value_file(file_path: str) -> dict[str, str | float | int]:
    """Reads a plain-text ``key=value`` configuration file.

    Blank lines and lines starting with ``#`` are ignored. Keys are lower-cased and dashes are
    normalised to underscores, so ``n-angular = 128`` and ``n_angular=128`` are equivalent.

    Args:
        file_path (str): Path to the file.

    Returns:
        dict[str, str | float | int]: Parsed entries in file order.

    Raises:
        DomainError: If a non-comment line has no ``=``.
    """
    entries = {}
    with open(file_path, "r", encoding="utf-8") as file:
        for number, raw in enumerate(file, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{file_path}:{number}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            entries[key.strip().lower().replace("-", "_")] = coerce_scalar(value)
    return entries


def parse_complex(text) -> complex:
    """Parses a complex literal in engineering (``i``) or Python (``j``) notation.

    Example:
        >>> parse_complex("1+2i")
        (1+2j)
        >>> parse_complex([0.5, -1])
        (0.5-1j)
    """
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise DomainError(f"complex pair must have two entries, got {text!r}")
        return complex(float(text[0]), float(text[1]))
    token = str(text).replace(" ", "").replace("I", "i").replace("i", "j")
    if not token or not _COMPLEX_TOKEN.match(token):
        raise DomainError(f"cannot parse complex number from {text!r}")
    try:
        return complex(token)
    except ValueError as exception:
        raise DomainError(f"cannot parse complex number from {text!r}") from exception


def parse_poly_json(text: str | bytes) -> list[complex]:
    """Decodes a degree-ascending coefficient array.

    Entries may be plain numbers or ``[re, im]`` pairs, so ``[0, 1]`` and ``[[0, 0], [1, 0]]`` both
    describe the polynomial ``t``.

    Raises:
        DomainError: If the payload is not a JSON array of numbers or pairs.
    """
    try:
        payload = orjson.loads(text)
    except orjson.JSONDecodeError as exception:
        raise DomainError(f"invalid polynomial JSON: {exception}") from exception
    if not isinstance(payload, list):
        raise DomainError("polynomial JSON must be an array of coefficients")
    return [parse_complex(entry) for entry in payload]


def poly_to_json(coeffs: Iterable[complex]) -> bytes:
    return orjson.dumps([[float(c.real), float(c.imag)] for c in map(complex, coeffs)])
