//! Minimal SVG scatter/curve plotter for coherence-purity diagrams.
//!
//! Fixed 800×600 canvas, purity on x over [¼, 1], coherence on y from 0 up
//! to the data maximum. Series are colored in file order; the legend uses
//! the series labels.

use crate::csvio::Series;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

struct Frame {
    y_max: f64,
}

impl Frame {
    fn x(&self, p: f64) -> f64 {
        MARGIN_L + (p - 0.25) / 0.75 * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, c: f64) -> f64 {
        HEIGHT - MARGIN_B - c / self.y_max * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

/// Renders the series to a complete SVG document.
pub fn render(series: &[Series]) -> String {
    let y_max = series
        .iter()
        .map(|s| s.max_y())
        .fold(1.0f64, f64::max)
        * 1.05;
    let frame = Frame { y_max };
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    let x0 = frame.x(0.25);
    let x1 = frame.x(1.0);
    let y0 = frame.y(0.0);
    let y1 = MARGIN_T;
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    for t in [0.25, 0.5, 0.75, 1.0] {
        let x = frame.x(t);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>\n\
             <text x=\"{x}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{t}</text>\n",
            y0 + 6.0,
            y0 + 22.0
        ));
    }
    let mut c_tick = 0.0;
    while c_tick <= frame.y_max {
        let y = frame.y(c_tick);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{x0}\" y2=\"{y}\" stroke=\"black\"/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"end\">{c_tick:.2}</text>\n",
            x0 - 6.0,
            x0 - 10.0,
            y + 4.0
        ));
        c_tick += 0.5;
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"15\" text-anchor=\"middle\">purity</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-size=\"15\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {0})\">coherence (l1)</text>\n",
        (frame.y(0.0) + y1) / 2.0
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match s {
            Series::Points { xy, .. } => {
                for (p, c) in xy {
                    svg.push_str(&format!(
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.4\" fill=\"{color}\" \
                         fill-opacity=\"0.55\"/>\n",
                        frame.x(*p),
                        frame.y(*c)
                    ));
                }
            }
            Series::Band { lo, hi, .. } => {
                for line in [lo, hi] {
                    let pts: Vec<String> = line
                        .iter()
                        .map(|(p, c)| format!("{:.2},{:.2}", frame.x(*p), frame.y(*c)))
                        .collect();
                    svg.push_str(&format!(
                        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                         stroke-width=\"1.8\"/>\n",
                        pts.join(" ")
                    ));
                }
            }
        }
    }

    // legend, top-right
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_T + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>\n",
            WIDTH - 190.0,
            y - 10.0,
            WIDTH - 172.0,
            y,
            xml_escape(s.label())
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_points_and_bands() {
        let series = vec![
            Series::Points {
                label: "samples".into(),
                xy: vec![(0.5, 0.3), (0.9, 1.2)],
            },
            Series::Band {
                label: "bound".into(),
                lo: vec![(0.5, 0.0), (1.0, 0.5)],
                hi: vec![(0.5, 0.4), (1.0, 1.0)],
            },
        ];
        let svg = render(&series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("circle"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("samples") && svg.contains("bound"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
