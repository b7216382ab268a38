"""
Main executing file of the command line tool.
Runs one subcommand (or a batch of jobs) and exits with its code.
"""
import sys

from cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
