from .rendering import RenderError, load_manifest, render

__version__ = "0.1.0"

__all__ = ["RenderError", "load_manifest", "render"]
