"""Bundled regression corpus: diagram documents and golden reports."""
