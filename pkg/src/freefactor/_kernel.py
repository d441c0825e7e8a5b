"""Select the compiled word kernel when available, else the pure fallback."""

try:
    from freefactor._reduce import IMPLEMENTATION, concat, reduce_word
except ImportError:  # pragma: no cover - depends on build environment
    from freefactor._reduce_py import IMPLEMENTATION, concat, reduce_word

__all__ = ["IMPLEMENTATION", "concat", "reduce_word"]
