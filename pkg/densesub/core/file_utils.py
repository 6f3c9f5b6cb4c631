"""
DenseSub - File Utilities
=========================

Utilities for artifact headers, resource path handling, and text/CSV output.
"""

import csv
import io
import os
import re
import sys

from packaging.version import InvalidVersion, Version

from ..constants import APP_VERSION, ARTIFACT_HEADER, GENERATOR_ID

_HEADER_RE = re.compile(r"^#\s*densesub\s+(\S+)\s+generator\s+(\S+)\s*$")


def get_resource_path(filename):
    """
    Determine the correct path for resources when running as executable or script.

    Args:
        filename (str): Path of the resource relative to the package directory

    Returns:
        str: Absolute path to the resource file
    """
    if hasattr(sys, '_MEIPASS'):
        # Running as PyInstaller executable
        return os.path.join(sys._MEIPASS, "densesub", filename)
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), filename)


def check_artifact_header(lines, error_cls):
    """
    Validate the first `# densesub ...` header line, if one is present.

    Artifacts without a header are accepted. A header from a different major
    version or a different random generator raises `error_cls`.
    """
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if not stripped.startswith("#"):
            return None
        match = _HEADER_RE.match(stripped)
        if match is None:
            continue
        version_text, generator = match.groups()
        try:
            version = Version(version_text)
        except InvalidVersion as exc:
            raise error_cls(f"artifact header has an invalid version '{version_text}'") from exc
        if version.major != Version(APP_VERSION).major:
            raise error_cls(f"artifact written by densesub {version}, "
                            f"incompatible with {APP_VERSION}")
        if generator != GENERATOR_ID:
            raise error_cls(f"artifact generator '{generator}' differs from {GENERATOR_ID}")
        return version
    return None


def strip_comments(text):
    """(line number, content) for every non-blank line that is not a '#' comment."""
    return [(no, line.strip()) for no, line in enumerate(text.splitlines(), 1)
            if line.strip() and not line.lstrip().startswith("#")]


def read_text(path):
    with open(path, "r", encoding="ascii") as f:
        return f.read()


def write_text(path, text):
    """Write an artifact; parent directories are created as needed."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(text)


def format_csv(columns, rows, summary=None):
    """
    Render a CSV table with the artifact header and a fixed column order.

    Args:
        columns (list): column names, written as the header row
        rows (list): sequences aligned with `columns`
        summary (list): optional lines appended as '#' comments
    """
    buffer = io.StringIO()
    buffer.write(ARTIFACT_HEADER + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if value is None else value for value in row])
    for line in summary or ():
        buffer.write(f"# {line}\n")
    return buffer.getvalue()


def parse_seed_range(text):
    """'3' -> [3]; '1-10' -> [1..10]; '1,4,9' -> [1, 4, 9]."""
    seeds = []
    for chunk in str(text).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk:
            low, high = (int(part) for part in chunk.split("-", 1))
            if high < low:
                raise ValueError(f"empty seed range '{chunk}'")
            seeds.extend(range(low, high + 1))
        else:
            seeds.append(int(chunk))
    return seeds
