"""Shared stream-file header helpers.

Every stream file starts with one comment line declaring the format and
the stream epoch, e.g.:

    # drivesense imu v1 units=s epoch=2026-01-05T00:00:00Z
"""


def format_header(stream: str, header: dict | None = None) -> str:
    parts = [f"# drivesense {stream} v1 units=s"]
    for k, v in (header or {}).items():
        parts.append(f"{k}={v}")
    return " ".join(parts) + "\n"


def parse_header(line: str) -> dict:
    out = {}
    for token in line.lstrip("#").split():
        if "=" in token:
            k, _, v = token.partition("=")
            out[k] = v
    return out
