"""Command-line entry point: ``python main.py analyze demo.csv --metric all``."""

from payback.cli import main

if __name__ == "__main__":
    main()
