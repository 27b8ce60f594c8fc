"""suzukicartier main entry point."""

from suzukicartier.cli import cli

if __name__ == "__main__":
    cli()
