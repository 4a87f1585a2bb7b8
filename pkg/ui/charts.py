"""Static SVG line charts for the recovery series, written without a plotting library."""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from utils.utils import PathLike, atomic_write_text

# --- Constants ---
WIDTH = 1000
HEIGHT = 460
MARGIN_LEFT = 90
MARGIN_RIGHT = 190
MARGIN_TOP = 60
MARGIN_BOTTOM = 70
Y_TICKS = 5
LEGEND_STEP = 22

COLORS = {
    "historical": "#1f77b4",
    "observed": "#2ca02c",
    "predicted": "#d62728",
    "cumulative": "#9467bd",
}
FALLBACK_COLORS = ["#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]

# --- Logging Setup ---
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartSeries:
    name: str
    x: Sequence[int]  # positions on the shared day axis
    y: Sequence[float]
    color: Optional[str] = None
    dashed: bool = False


def _escape(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _format_value(value: float) -> str:
    magnitude = abs(value)
    if magnitude >= 1e6:
        return f"{value / 1e6:.1f}M"
    if magnitude >= 1e3:
        return f"{value / 1e3:.0f}k"
    return f"{value:.4g}"


def _svg_document(height: int, body: Sequence[str]) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
        *body,
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def render_line_chart(
    title: str,
    x_labels: Sequence[str],
    series: Sequence[ChartSeries],
    y_label: str = "",
) -> str:
    """SVG text for one or more series over a shared labelled x axis.

    Series may be empty; the frame, axes and legend are drawn regardless.
    """
    return _svg_document(HEIGHT, _chart_elements(title, x_labels, series, y_label))


def render_panel_chart(
    panels: Sequence[Tuple[str, Sequence[ChartSeries]]],
    x_labels: Sequence[str],
    y_label: str = "",
) -> str:
    """Stack several (title, series) charts vertically in one SVG, one ``<g class="panel">`` each."""
    body: List[str] = []
    for k, (title, series) in enumerate(panels):
        body.append(f'  <g class="panel" transform="translate(0,{k * HEIGHT})">')
        body.extend("  " + line for line in _chart_elements(title, x_labels, series, y_label))
        body.append("  </g>")
    return _svg_document(HEIGHT * max(len(panels), 1), body)


def _chart_elements(
    title: str,
    x_labels: Sequence[str],
    series: Sequence[ChartSeries],
    y_label: str,
) -> List[str]:
    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    n_x = max(len(x_labels), 1)

    values = [v for s in series for v in s.y if math.isfinite(v)]
    y_min = min(values) if values else 0.0
    y_max = max(values) if values else 1.0
    if y_max == y_min:
        y_min, y_max = y_min - 1.0, y_max + 1.0

    def sx(i: float) -> float:
        if n_x == 1:
            return (plot_left + plot_right) / 2.0
        return plot_left + i * (plot_right - plot_left) / (n_x - 1)

    def sy(v: float) -> float:
        return plot_bottom - (v - y_min) / (y_max - y_min) * (plot_bottom - plot_top)

    parts: List[str] = [
        f'  <rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'  <text x="{WIDTH / 2:.0f}" y="32" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{_escape(title)}</text>',
        f'  <line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" stroke="#333"/>',
        f'  <line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" stroke="#333"/>',
    ]

    for k in range(Y_TICKS + 1):
        v = y_min + (y_max - y_min) * k / Y_TICKS
        y = sy(v)
        parts.append(
            f'  <line x1="{plot_left}" y1="{y:.2f}" x2="{plot_right}" y2="{y:.2f}" stroke="#e5e5e5"/>'
        )
        parts.append(
            f'  <text x="{plot_left - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{_format_value(v)}</text>'
        )

    if x_labels:
        ticks = sorted({0, len(x_labels) // 2, len(x_labels) - 1})
        for i in ticks:
            parts.append(
                f'  <text x="{sx(i):.2f}" y="{plot_bottom + 20}" text-anchor="middle" font-size="11" '
                f'font-family="sans-serif">{_escape(x_labels[i])}</text>'
            )
    if y_label:
        parts.append(
            f'  <text x="20" y="{(plot_top + plot_bottom) / 2:.0f}" font-size="12" font-family="sans-serif" '
            f'transform="rotate(-90 20 {(plot_top + plot_bottom) / 2:.0f})" text-anchor="middle">'
            f'{_escape(y_label)}</text>'
        )

    # crowded legends shrink to stay inside the plot height
    legend_step = min(LEGEND_STEP, (plot_bottom - plot_top - 10) / max(len(series), 1))
    legend_font = min(12.0, max(4.0, legend_step - 2))
    for idx, s in enumerate(series):
        color = s.color or COLORS.get(s.name.lower(), FALLBACK_COLORS[idx % len(FALLBACK_COLORS)])
        points = [
            f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(s.x, s.y) if math.isfinite(y)
        ]
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        parts.append(
            f'  <polyline class="series" data-name="{_escape(s.name)}" points="{" ".join(points)}" '
            f'fill="none" stroke="{color}" stroke-width="1.8"{dash}/>'
        )
        legend_y = plot_top + 10 + idx * legend_step
        parts.append(
            f'  <line x1="{plot_right + 20}" y1="{legend_y:.2f}" x2="{plot_right + 44}" y2="{legend_y:.2f}" '
            f'stroke="{color}" stroke-width="3"{dash}/>'
        )
        parts.append(
            f'  <text class="legend" x="{plot_right + 52}" y="{legend_y + legend_font / 3:.2f}" '
            f'font-size="{legend_font:g}" font-family="sans-serif">{_escape(s.name)}</text>'
        )

    return parts


def write_line_chart(path: PathLike, title: str, x_labels: Sequence[str], series: Sequence[ChartSeries], y_label: str = "") -> None:
    atomic_write_text(path, render_line_chart(title, x_labels, series, y_label))
    logger.info(f"Chart written to '{path}'.")


def write_panel_chart(
    path: PathLike,
    panels: Sequence[Tuple[str, Sequence[ChartSeries]]],
    x_labels: Sequence[str],
    y_label: str = "",
) -> None:
    atomic_write_text(path, render_panel_chart(panels, x_labels, y_label))
    logger.info(f"Chart with {len(panels)} panels written to '{path}'.")
