"""bmforge: band-limited functions under radial weights, with numerical certificates."""

__version__ = "0.1.0"
