#!/usr/bin/env python
"""Command-line utility for the persformer toolkit."""
import sys


def main():
    """Run a toolkit command."""
    from cli import execute_from_command_line

    sys.exit(execute_from_command_line(sys.argv[1:]))


if __name__ == '__main__':
    main()
