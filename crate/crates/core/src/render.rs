//! Plain-text orbit boards.

use crate::orbit::OrbitBoard;
use crate::poset::Poset;
use crate::whorm::Decomposition;

const COLORS: [u8; 6] = [31, 32, 33, 34, 35, 36];

/// `a`, `b`, .., `z`, `aa`, `ab`, ..
pub fn whorm_glyph(id: usize) -> String {
    let mut n = id;
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// One row per board state, columns in element order. With a
/// decomposition each cell carries its whorm glyph and, if `color` is set,
/// an ANSI color per whorm.
pub fn render_board(board: &OrbitBoard, whorms: Option<&Decomposition>, color: bool) -> String {
    let glyphs = whorms.filter(|d| !d.is_empty());
    let cell = |r: usize, x: usize| {
        let v = board.label(r, x).to_string();
        match glyphs {
            Some(d) => v + &whorm_glyph(d.owner(r, x)),
            None => v,
        }
    };
    let width = (0..board.len())
        .flat_map(|r| (0..board.width()).map(move |x| (r, x)))
        .map(|(r, x)| cell(r, x).len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for r in 0..board.len() {
        let row: Vec<String> = (0..board.width())
            .map(|x| {
                let text = format!("{:>width$}", cell(r, x));
                match glyphs {
                    Some(d) if color => {
                        let c = COLORS[d.owner(r, x) % COLORS.len()];
                        format!("\x1b[{c}m{text}\x1b[0m")
                    }
                    _ => text,
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Column names aligned with [`render_board`] output.
pub fn board_header(poset: &Poset, board: &OrbitBoard, whorms: Option<&Decomposition>) -> String {
    let plain = render_board(board, whorms, false);
    let width = plain
        .lines()
        .next()
        .and_then(|l| l.split_whitespace().map(str::len).max())
        .unwrap_or(1)
        .max(poset.names().iter().map(|n| n.chars().count()).max().unwrap_or(1));
    let cols: Vec<String> = poset.names().iter().map(|n| format!("{n:>width$}")).collect();
    cols.join(" ")
}
