//! Braid diagrams. Time runs left to right and positions bottom to top.
//! The warp is drawn blue and the weft red. At `τ_s^{+1}` the strand moving
//! up passes over; at `τ_s^{-1}` the strand moving down does.

use std::fmt::Write;
use std::str::FromStr;

use weft_core::{BraidError, BraidWord, Sign};

const WARP_COLOR: &str = "#1f5fd0";
const WEFT_COLOR: &str = "#c8102e";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ascii,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "svg" => Ok(Format::Svg),
            "ascii" => Ok(Format::Ascii),
            _ => Err(format!("unknown format {s:?} (expected svg or ascii)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    /// Starting position of the strand drawn as the warp.
    pub warp: Option<usize>,
    /// Pixels between neighbouring positions and between crossings (SVG).
    pub spacing: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            format: Format::Svg,
            warp: None,
            spacing: 40,
        }
    }
}

pub fn render(word: &BraidWord, spec: &RenderSpec) -> Result<String, BraidError> {
    let trace = match spec.warp {
        Some(k) => Some(word.warp_trace(k)?.positions),
        None => None,
    };
    Ok(match spec.format {
        Format::Svg => svg(word, trace.as_deref(), spec.spacing.max(10)),
        Format::Ascii => ascii(word, trace.as_deref()),
    })
}

/// Whether the strand at `position` before crossing `k` is the warp.
fn is_warp(trace: Option<&[usize]>, k: usize, position: usize) -> bool {
    trace.is_some_and(|t| t[k] == position)
}

fn svg(word: &BraidWord, trace: Option<&[usize]>, step: u32) -> String {
    let n = word.strands() as u32;
    let cols = word.len().max(1) as u32;
    let margin = step;
    let width = 2 * margin + cols * step;
    let height = 2 * margin + (n - 1) * step;
    let x = |k: u32| margin + k * step;
    let y = |pos: usize| margin + (n - pos as u32) * step;
    let color = |warp: bool| if warp { WARP_COLOR } else { WEFT_COLOR };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    for pos in 1..=n as usize {
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{pos}</text>",
            margin / 2,
            y(pos) + 4
        );
    }
    if let Some(t) = trace {
        let mut points: Vec<String> = t.iter().enumerate().map(|(k, &p)| format!("{},{}", x(k as u32), y(p))).collect();
        if word.is_empty() {
            points.push(format!("{},{}", x(cols), y(t[0])));
        }
        let positions: Vec<String> = t.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            out,
            "<polyline class=\"warp-trace\" data-positions=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{WARP_COLOR}\" stroke-opacity=\"0.2\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
            positions.join(" "),
            points.join(" "),
            step / 4
        );
    }
    let line = |out: &mut String, x1: u32, y1: u32, x2: u32, y2: u32, stroke: &str, w: u32| {
        let _ = writeln!(
            out,
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{stroke}\" stroke-width=\"{w}\" stroke-linecap=\"round\"/>"
        );
    };
    if word.is_empty() {
        for pos in 1..=n as usize {
            line(&mut out, x(0), y(pos), x(cols), y(pos), color(is_warp(trace, 0, pos)), 3);
        }
    }
    for (k, g) in word.gens().iter().enumerate() {
        let (x1, x2) = (x(k as u32), x(k as u32 + 1));
        let s = g.index();
        for pos in (1..=n as usize).filter(|&p| p != s && p != s + 1) {
            line(&mut out, x1, y(pos), x2, y(pos), color(is_warp(trace, k, pos)), 3);
        }
        let rising = (x1, y(s), x2, y(s + 1), color(is_warp(trace, k, s)));
        let falling = (x1, y(s + 1), x2, y(s), color(is_warp(trace, k, s + 1)));
        let (under, over) = match g.sign() {
            Sign::Pos => (falling, rising),
            Sign::Neg => (rising, falling),
        };
        line(&mut out, under.0, under.1, under.2, under.3, under.4, 3);
        line(&mut out, over.0, over.1, over.2, over.3, "white", 9);
        line(&mut out, over.0, over.1, over.2, over.3, over.4, 3);
    }
    out.push_str("</svg>\n");
    out
}

fn ascii(word: &BraidWord, trace: Option<&[usize]>) -> String {
    let n = word.strands();
    let rows = 2 * n - 1;
    let row = |pos: usize| 2 * (n - pos);
    let label_width = n.to_string().len();
    let mut grid: Vec<Vec<char>> = (0..rows)
        .map(|r| {
            let mut line: Vec<char> = if r % 2 == 0 {
                format!("{:>label_width$} ", n - r / 2).chars().collect()
            } else {
                vec![' '; label_width + 1]
            };
            line.reserve(4 * word.len() + 1);
            line
        })
        .collect();
    let run = |warp: bool| if warp { '=' } else { '-' };
    for (k, g) in word.gens().iter().enumerate() {
        let s = g.index();
        for pos in 1..=n {
            let ch = run(is_warp(trace, k, pos));
            let cells: [char; 4] = if pos == s + 1 {
                [ch, '\\', ' ', '/']
            } else if pos == s {
                [ch, '/', ' ', '\\']
            } else {
                [ch; 4]
            };
            grid[row(pos)].extend(cells);
            if pos < n {
                let glyph = if pos == s {
                    match g.sign() {
                        Sign::Pos => '/',
                        Sign::Neg => '\\',
                    }
                } else {
                    ' '
                };
                grid[row(pos) - 1].extend([' ', ' ', glyph, ' ']);
            }
        }
    }
    let last = word.len();
    for pos in 1..=n {
        let ch = run(is_warp(trace, last, pos));
        grid[row(pos)].extend(if word.is_empty() { [ch; 4].to_vec() } else { vec![ch] });
    }
    let mut out = String::new();
    for line in grid {
        let s: String = line.into_iter().collect();
        out.push_str(s.trim_end());
        out.push('\n');
    }
    if let Some(t) = trace {
        let positions: Vec<String> = t.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "warp: {}", positions.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_word() -> BraidWord {
        BraidWord::from_signed(4, &[1, -2, -3, 2, 1]).unwrap()
    }

    #[test]
    fn ascii_diagram_by_hand() {
        let w = BraidWord::from_signed(3, &[1, -2]).unwrap();
        let spec = RenderSpec {
            format: Format::Ascii,
            warp: Some(1),
            ..RenderSpec::default()
        };
        let text = render(&w, &spec).unwrap();
        let expected = "3 -----\\ /=\n        \\\n2 -\\ /=/ \\-\n    /\n1 =/ \\-----\nwarp: 1 2 3\n";
        assert_eq!(text, expected, "\n{text}");
    }

    #[test]
    fn svg_counts_and_trace() {
        let spec = RenderSpec {
            warp: Some(1),
            ..RenderSpec::default()
        };
        let svg = render(&fig_word(), &spec).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // 5 crossings: 2 uninvolved lines + under + halo + over each
        assert_eq!(svg.matches("<line ").count(), 5 * 5);
        assert!(svg.contains("data-positions=\"1 2 3 4 4 4\""));
        assert_eq!(render(&fig_word(), &spec).unwrap(), svg);
    }

    #[test]
    fn empty_word_is_parallel_lines() {
        let w = BraidWord::identity(4).unwrap();
        let svg = render(&w, &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<line ").count(), 4);
        let ascii = render(&w, &RenderSpec { format: Format::Ascii, ..RenderSpec::default() }).unwrap();
        assert_eq!(ascii.lines().filter(|l| l.ends_with("----")).count(), 4);
    }

    #[test]
    fn warp_out_of_range_is_rejected() {
        let spec = RenderSpec {
            warp: Some(5),
            ..RenderSpec::default()
        };
        assert!(render(&fig_word(), &spec).is_err());
    }
}
