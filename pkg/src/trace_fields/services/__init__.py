"""
Service layer for Trace Fields.

Contains the command dispatcher shared by the CLI and the HTTP API.
"""
