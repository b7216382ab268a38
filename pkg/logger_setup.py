"""
Exposes a single function "setup_logging" that initialises the logger.
This logger outputs into a queue and splits output into stderr and,
optionally, a log file.
"""
import logging
from datetime import datetime, UTC
from logging import Formatter, StreamHandler, FileHandler
from logging.handlers import QueueHandler, QueueListener
from queue import Queue
from pathlib import Path
from sys import gettrace

from colorama.ansi import Fore, Style

DEFAULT_FORMATTER = "[" + Fore.BLACK + "%(asctime)s {colour}%(levelname)-8s"\
    + Style.RESET_ALL + "] " + Style.BRIGHT + Fore.MAGENTA + "%(threadName)s@%(name)s: "\
    + Style.RESET_ALL + "%(message)s"

LEVEL_COLOURS = (
    (logging.DEBUG, Style.BRIGHT + Fore.BLACK),
    (logging.INFO, Style.BRIGHT + Fore.BLUE),
    (logging.WARNING, Style.BRIGHT + Fore.YELLOW),
    (logging.ERROR, Fore.RED),
    (logging.CRITICAL, Style.BRIGHT + Fore.RED),
)

__all__ = (
    "setup_logging",
)


class _ColouredFormatter(Formatter):
    FORMATS = {
        level: Formatter(
            DEFAULT_FORMATTER.format(colour=colour),
            '%Y-%m-%d %H:%M:%S',
        )
        for level, colour in LEVEL_COLOURS
    }

    def format(self, record: logging.LogRecord) -> str:
        formatter = self.FORMATS.get(record.levelno, self.FORMATS[logging.DEBUG])
        # Keep tracebacks uncoloured and uncached
        if record.exc_info:
            text = formatter.formatException(record.exc_info)
            record.exc_text = f"{Fore.RED}{text}{Style.RESET_ALL}"
        output = formatter.format(record)
        record.exc_text = None
        return output


STDERR_FORMATTER = _ColouredFormatter()
FILE_FORMATTER = Formatter(
    "[%(asctime)s %(levelname)-8s] %(threadName)s@%(name)s: %(message)s"
)

_listener: QueueListener|None = None
_queue_handler: QueueHandler|None = None


def _is_debugging():
    """Checks if the program has an attached debugger"""
    return gettrace() is not None


def setup_logging(
        stderr_level: int|str=20,
        file_level: int|str=10,
        *,
        debug_stderr_level: int|str=10,
        log_dir: str|Path|None=None
):
    """
    Initialises the default logger to use some relevant info.
    Uses a queue-based logger so solver threads never block on output.
    Calling this again replaces the previous handlers.
    """
    global _listener, _queue_handler
    root = logging.getLogger()
    if _listener is not None:
        _listener.stop()
        root.removeHandler(_queue_handler)

    queue = Queue(-1)
    queue_handler = QueueHandler(queue)
    # Console Output (Coloured)
    stderr_handler = StreamHandler()
    stderr_handler.setFormatter(STDERR_FORMATTER)
    stderr_handler.setLevel(
        debug_stderr_level
        if _is_debugging()
        else stderr_level
    )
    handlers: list[logging.Handler] = [stderr_handler]
    # File Output
    if log_dir:
        filepath = Path(log_dir, datetime.now(UTC).strftime("%Y-%m-%d+%H-%M-%S") + ".log")
        filepath.parent.mkdir(parents=True, exist_ok=True)
        file_handler = FileHandler(
            filepath,
            encoding="utf-8"
        )
        file_handler.setFormatter(FILE_FORMATTER)
        file_handler.setLevel(file_level)
        handlers.append(file_handler)

    queue_listener = QueueListener(
        queue,
        *handlers,
        respect_handler_level=True
    )
    queue_listener.start()

    # Records below every handler's level are dropped before reaching the queue
    root.setLevel(min(handler.level for handler in handlers))
    root.addHandler(queue_handler)
    _listener = queue_listener
    _queue_handler = queue_handler


def flush_logging():
    """Drains the queue; used before the process exits."""
    global _listener
    if _listener is not None:
        _listener.stop()
        _listener.start()
