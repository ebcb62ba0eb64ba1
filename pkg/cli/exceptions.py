"""
Errors surfaced by command-line commands.
"""

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class CommandError(Exception):
    """A command failed; exit_code says how the process should exit."""

    def __init__(self, message: str, exit_code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.exit_code = exit_code
