"""
Entry point for running pottab: python -m src <command>
"""
import sys
from .cli import main

if __name__ == "__main__":
    sys.exit(main())
