import os
import re
import tempfile
import unittest
import xml.etree.ElementTree as ET

from ui.charts import (
    COLORS,
    HEIGHT,
    ChartSeries,
    render_line_chart,
    render_panel_chart,
    write_line_chart,
    write_panel_chart,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def polylines(svg_text):
    root = ET.fromstring(svg_text)
    return root.findall(f"{SVG_NS}polyline")


class TestRenderLineChart(unittest.TestCase):
    def test_one_polyline_per_series(self):
        svg = render_line_chart(
            "Historical & predicted",
            ["2021-02-01", "2021-02-02", "2021-02-03", "2021-02-04"],
            [
                ChartSeries("historical", [0, 1, 2], [10.0, 12.0, 9.0]),
                ChartSeries("predicted", [2, 3], [9.0, 14.0], dashed=True),
            ],
            y_label="persons / day",
        )
        lines = polylines(svg)
        self.assertEqual([l.get("data-name") for l in lines], ["historical", "predicted"])
        self.assertEqual(len(lines[0].get("points").split()), 3)
        self.assertEqual(lines[0].get("stroke"), COLORS["historical"])
        self.assertIsNotNone(lines[1].get("stroke-dasharray"))
        self.assertIn("Historical &amp; predicted", svg)

    def test_points_stay_inside_canvas(self):
        svg = render_line_chart("t", [str(i) for i in range(50)], [ChartSeries("observed", range(50), [i * i for i in range(50)])])
        root = ET.fromstring(svg)
        width, height = float(root.get("width")), float(root.get("height"))
        for pair in polylines(svg)[0].get("points").split():
            x, y = (float(v) for v in pair.split(","))
            self.assertTrue(0 <= x <= width and 0 <= y <= height)

    def test_empty_series_still_renders(self):
        svg = render_line_chart("Forecast", [], [ChartSeries("predicted", [], [])])
        lines = polylines(svg)
        self.assertEqual(len(lines), 1)
        self.assertEqual(lines[0].get("points"), "")

    def test_flat_series(self):
        svg = render_line_chart("flat", ["a", "b"], [ChartSeries("cumulative", [0, 1], [5.0, 5.0])])
        self.assertRegex(polylines(svg)[0].get("points"), re.compile(r"^[\d.]+,[\d.]+ [\d.]+,[\d.]+$"))

    def test_write_is_atomic_and_parsable(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "charts", "daily.svg")
            write_line_chart(path, "Daily", ["a", "b"], [ChartSeries("historical", [0, 1], [1.0, 2.0])])
            self.assertEqual(os.listdir(os.path.dirname(path)), ["daily.svg"])
            with open(path, encoding="utf-8") as f:
                self.assertEqual(len(polylines(f.read())), 1)

    def test_crowded_legend_stays_inside_plot(self):
        series = [ChartSeries(f"country {i:02d}", [0, 1], [i, i + 1.0]) for i in range(64)]
        root = ET.fromstring(render_line_chart("Countries", ["a", "b"], series))
        legend = [t for t in root.findall(f"{SVG_NS}text") if t.get("class") == "legend"]
        self.assertEqual(len(legend), 64)
        ys = [float(t.get("y")) for t in legend]
        self.assertEqual(ys, sorted(ys))
        self.assertLess(ys[-1], float(root.get("height")))


class TestRenderPanelChart(unittest.TestCase):
    def test_panels_stack_vertically(self):
        panels = [
            ("A to B", [ChartSeries("Albania", [0, 1], [1.0, 2.0]), ChartSeries("Brazil", [0, 1], [3.0, 5.0])]),
            ("C to D", [ChartSeries("Chad", [0, 1], [0.0, 1.0])]),
        ]
        root = ET.fromstring(render_panel_chart(panels, ["d0", "d1"], y_label="persons"))
        self.assertEqual(float(root.get("height")), 2 * HEIGHT)
        groups = root.findall(f"{SVG_NS}g")
        self.assertEqual([g.get("transform") for g in groups], ["translate(0,0)", f"translate(0,{HEIGHT})"])
        self.assertEqual([p.get("data-name") for p in groups[0].findall(f"{SVG_NS}polyline")], ["Albania", "Brazil"])
        self.assertEqual([p.get("data-name") for p in groups[1].findall(f"{SVG_NS}polyline")], ["Chad"])

    def test_no_panels(self):
        root = ET.fromstring(render_panel_chart([], []))
        self.assertEqual(root.findall(f"{SVG_NS}g"), [])

    def test_write_panel_chart(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "countries.svg")
            write_panel_chart(path, [("all", [ChartSeries("Chad", [0], [1.0])])], ["d0"])
            with open(path, encoding="utf-8") as f:
                self.assertEqual(len(list(ET.fromstring(f.read()).iter(f"{SVG_NS}polyline"))), 1)


if __name__ == "__main__":
    unittest.main()
