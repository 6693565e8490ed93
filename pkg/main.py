# Program entry point: load .env defaults (guards, workers), then run the CLI
import sys

from dotenv import load_dotenv

from canram.cli import main

load_dotenv()

if __name__ == "__main__":
    sys.exit(main())
