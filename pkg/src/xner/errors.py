"""Shared exception types."""


class DataError(ValueError):
    """Malformed input data (bad record, bad tag sequence, misaligned files).

    Messages always identify the offending location (line number, record
    offset or sentence index) so failures in large files are actionable.
    """


class UsageError(ValueError):
    """Invalid configuration or command-line usage."""
