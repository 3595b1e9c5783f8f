#!/usr/bin/env python
"""Command-line entry point: evaluate, audit, recover and witness run as management commands."""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings.development')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages in requirements.txt "
            "and check that the virtual environment is active."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
