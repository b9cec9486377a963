"""
Utility Functions.
"""
import datetime
import os
from typing import Optional


def within_window(date: datetime.date,
                  start: Optional[datetime.date] = None,
                  end: Optional[datetime.date] = None) -> bool:
    """True if `date` lies in [start, end]; a missing bound is open."""
    if start is not None and date < start:
        return False
    if end is not None and date > end:
        return False
    return True


def read_bytes(path: str) -> bytes:
    with open(path, 'rb') as fp:
        return fp.read()


def write_bytes(path: str, data: bytes):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'wb') as fp:
        fp.write(data)


def write_text(path: str, text: str):
    write_bytes(path, text.encode('utf-8'))
