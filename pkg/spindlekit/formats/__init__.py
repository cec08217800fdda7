"""Input/report documents and SVG rendering."""

from .documents import (
    SCHEMA_VERSION,
    InputDocument,
    ShapeSpec,
    build_report,
    parse_input,
    parse_report,
    serialize_report,
)
from .render import Scene, render_svg, render_svg_text
