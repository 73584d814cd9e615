"""Timestamp formatting for the task table, the SMS audit log, and data files."""

from __future__ import annotations

from datetime import datetime

STAMP_FORMAT = "%Y-%m-%d %H:%M:%S"


def _hour12(dt: datetime) -> int:
    return dt.hour % 12 or 12


def _ampm(dt: datetime) -> str:
    return "AM" if dt.hour < 12 else "PM"


def task_date(dt: datetime) -> str:
    """Task-table date column, e.g. ``7/5/2010``."""
    return f"{dt.month}/{dt.day}/{dt.year}"


def task_time(dt: datetime) -> str:
    """Task-table time column, e.g. ``7:00:00 PM``."""
    return f"{_hour12(dt)}:{dt.minute:02d}:{dt.second:02d} {_ampm(dt)}"


def sms_date(dt: datetime) -> str:
    """SMS-log date column, e.g. ``17 / 02 / 2010``."""
    return f"{dt.day:02d} / {dt.month:02d} / {dt.year}"


def sms_time(dt: datetime) -> str:
    """SMS-log time column, e.g. ``01:19 PM``."""
    return f"{_hour12(dt):02d}:{dt.minute:02d} {_ampm(dt)}"


def parse_stamp(text: str) -> datetime:
    return datetime.strptime(text, STAMP_FORMAT)


def format_stamp(dt: datetime) -> str:
    return dt.strftime(STAMP_FORMAT)
