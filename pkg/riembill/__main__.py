"""
Run the riembill command line tool with ``python -m riembill``.
"""
# standard libraries imports
import sys

# riembill imports
from riembill.Cli import main

if __name__ == "__main__":
    sys.exit(main())
