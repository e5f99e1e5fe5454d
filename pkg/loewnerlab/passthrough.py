import sys
from datetime import datetime

from loewnerlab.types import Log, LogLevel


class Passthrough:
    """
    Passthrough writes logs to stdout, or to stderr for errors.
    """

    def log_passthrough(self, log: Log):
        match log.level:
            case LogLevel.ERROR:
                sys.stderr.write(self._format_log(log) + "\n")
            case _:
                sys.stdout.write(self._format_log(log) + "\n")

    def _format_log(self, log: Log) -> str:
        timestamp_str = self._format_timestamp(log.timestamp)
        return f"[{timestamp_str}] [{log.level.value}] {log}".strip()

    def _format_timestamp(self, timestamp: datetime) -> str:
        return timestamp.strftime("%Y-%m-%d %H:%M:%S")
