# This file makes Python treat the `pebblebound` directory as a package.

try:
    from ._version import version as __version__
except ImportError:
    try:
        from importlib.metadata import version, PackageNotFoundError
        __version__ = version("pebblebound")
    except (ImportError, PackageNotFoundError):
        __version__ = "0.0.0+unknown"
