"""Input validation for file tokens and output names.

Identifiers read from equation, picture and catalog files are checked here
before they reach the library, and names derived from user input are
sanitized before they become output file names.
"""

import re
from pathlib import Path
from typing import Optional


def validate_identifier(name: str) -> bool:
    """Validate a factor, generator, arc, vertex, region or section id.

    Ids start with a letter or digit and may contain letters, digits,
    underscores and dots. Characters used as separators in the file formats
    (``: , / | > = [ ]`` and whitespace) are rejected.

    Args:
        name: The identifier to validate

    Returns:
        True if valid, False otherwise

    Examples:
        >>> validate_identifier("H1")
        True
        >>> validate_identifier("c1_r2")
        True
        >>> validate_identifier("a:b")
        False
    """
    if not name or not isinstance(name, str):
        return False
    return bool(re.match(r'^[A-Za-z0-9][A-Za-z0-9_.]{0,63}$', name))


def validate_generator_name(name: str) -> bool:
    """Generator names must be usable in ``gen^k`` element tokens.

    Examples:
        >>> validate_generator_name("c11")
        True
        >>> validate_generator_name("1a")
        False
    """
    if not name or not isinstance(name, str):
        return False
    return bool(re.match(r'^[A-Za-z][A-Za-z0-9_]{0,31}$', name))


def validate_parameter_name(name: str) -> bool:
    """Validate a parameter name: ``l<n>`` for parameters, ``t<n>`` for auxiliaries.

    Examples:
        >>> validate_parameter_name("l12")
        True
        >>> validate_parameter_name("l0")
        False
        >>> validate_parameter_name("lambda1")
        False
    """
    if not name or not isinstance(name, str):
        return False
    return bool(re.match(r'^[lt][1-9][0-9]*$', name))


def parameter_id(name: str) -> Optional[int]:
    """Parameter id of ``l<n>`` (positive) or ``t<n>`` (negative), None if invalid.

    Examples:
        >>> parameter_id("l3")
        3
        >>> parameter_id("t2")
        -2
    """
    if not validate_parameter_name(name):
        return None
    value = int(name[1:])
    return value if name[0] == "l" else -value


def validate_letter_name(name: str, kinds: str = "dx") -> bool:
    """Validate a coefficient (``d<n>``) or variable (``x<n>``) letter name."""
    if not name or not isinstance(name, str):
        return False
    return bool(re.match(rf'^[{kinds}][1-9][0-9]*$', name))


def validate_file_path(file_path: str, allowed_extensions: Optional[set] = None) -> bool:
    """Validate an input path.

    Args:
        file_path: The file path to validate
        allowed_extensions: Optional set of allowed file extensions (e.g., {'.qeq', '.qpic'})

    Returns:
        True if the path has an allowed extension and no NUL byte
    """
    if not file_path or not isinstance(file_path, str) or "\x00" in file_path:
        return False
    if allowed_extensions:
        if Path(file_path).suffix.lower() not in allowed_extensions:
            return False
    return True


def sanitize_filename(name: str) -> str:
    """Turn an arbitrary label into a safe output file stem.

    Examples:
        >>> sanitize_filename("exx eqn / resolvent #3")
        'exx-eqn-resolvent-3'
        >>> sanitize_filename("../../etc")
        'etc'
    """
    result = name.lower()
    result = result.replace(" ", "-").replace("_", "-")
    result = re.sub(r'[^a-z0-9.-]', '-', result)
    result = re.sub(r'\.{2,}', '', result)
    result = re.sub(r'-+', '-', result)
    result = result.strip("-.")
    return result or "output"


if __name__ == "__main__":
    # Quick tests
    test_cases = [
        ("H1", True),
        ("beta1", True),
        ("rep.2", True),
        ("a:b", False),
        ("x y", False),
        ("", False),
        ("a" * 65, False),
    ]

    print("Testing validate_identifier:")
    for name, expected in test_cases:
        result = validate_identifier(name)
        status = "✓" if result == expected else "✗"
        print(f"  {status} '{name[:30]}' -> {result} (expected {expected})")
