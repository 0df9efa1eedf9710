"""Command-line harness: run, compare and export."""
