//! MovingAI `.map` and `.scen` text formats.

use super::{GridMap, Vertex, WorldError};

/// `Some(true)` for blocked, `Some(false)` for passable, `None` for unknown.
pub(crate) fn cell_kind(ch: char) -> Option<bool> {
    match ch {
        '.' | 'G' | 'S' => Some(false),
        '@' | 'T' | 'O' => Some(true),
        _ => None,
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> WorldError {
    WorldError::Parse { line, reason: reason.into() }
}

/// Parses a MovingAI grid map.
///
/// ```text
/// type octile
/// height 2
/// width 3
/// map
/// ..@
/// ...
/// ```
pub fn parse_map(text: &str) -> Result<GridMap, WorldError> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r')).enumerate().map(|(i, l)| (i + 1, l));

    let mut next_header = |expect: &str| -> Result<(usize, String), WorldError> {
        loop {
            match lines.next() {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some((n, l)) => return Ok((n, l.trim().to_string())),
                None => return Err(parse_err(0, format!("unexpected end of file, expected `{expect}`"))),
            }
        }
    };

    let (n, ty) = next_header("type")?;
    match ty.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["type", _] => {}
        _ => return Err(parse_err(n, format!("expected `type <name>`, found {ty:?}"))),
    }

    let mut height = None;
    let mut width = None;
    loop {
        let (n, line) = next_header("map")?;
        let parts: Vec<_> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["map"] => break,
            ["height", h] => height = Some(h.parse::<usize>().map_err(|_| parse_err(n, format!("bad height {h:?}")))?),
            ["width", w] => width = Some(w.parse::<usize>().map_err(|_| parse_err(n, format!("bad width {w:?}")))?),
            _ => return Err(parse_err(n, format!("malformed header line {line:?}"))),
        }
    }
    let (height, width) = match (height, width) {
        (Some(h), Some(w)) if h > 0 && w > 0 => (h, w),
        _ => return Err(parse_err(0, "header must declare positive height and width")),
    };

    let mut map = GridMap::new(width, height);
    let mut row = 0;
    for (n, line) in lines {
        if row == height {
            if line.trim().is_empty() {
                continue;
            }
            return Err(parse_err(n, format!("extra row beyond declared height {height}")));
        }
        let cells: Vec<char> = line.chars().collect();
        if cells.len() != width {
            return Err(parse_err(n, format!("row has {} cells, expected {width}", cells.len())));
        }
        for (col, ch) in cells.into_iter().enumerate() {
            let blocked = cell_kind(ch).ok_or_else(|| parse_err(n, format!("unknown cell character {ch:?}")))?;
            map.set_blocked(Vertex::new(row, col), blocked);
        }
        row += 1;
    }
    if row != height {
        return Err(parse_err(0, format!("found {row} rows, header declares {height}")));
    }
    Ok(map)
}

/// Writes a map in MovingAI format using `.` and `@`.
pub fn serialize_map(map: &GridMap) -> String {
    let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", map.height(), map.width());
    for row in map.to_rows() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// One row of a `.scen` file. Coordinates are already converted to `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioEntry {
    pub bucket: u32,
    pub map_name: String,
    pub map_width: usize,
    pub map_height: usize,
    pub start: Vertex,
    pub goal: Vertex,
    pub optimal_length: f64,
}

/// Parses a MovingAI scenario file. `x` is the column and `y` the row.
pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioEntry>, WorldError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if i == 0 && line.trim_start().starts_with("version") {
            continue;
        }
        let cols: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else {
            line.split_whitespace().collect()
        };
        if cols.len() != 9 {
            return Err(WorldError::Scenario { row, reason: format!("expected 9 columns, found {}", cols.len()) });
        }
        let num = |idx: usize, name: &str| -> Result<usize, WorldError> {
            cols[idx].trim().parse::<usize>().map_err(|_| WorldError::Scenario {
                row,
                reason: format!("bad {name} {:?}", cols[idx]),
            })
        };
        let bucket = num(0, "bucket")? as u32;
        let map_width = num(2, "map width")?;
        let map_height = num(3, "map height")?;
        let (sx, sy, gx, gy) = (num(4, "start x")?, num(5, "start y")?, num(6, "goal x")?, num(7, "goal y")?);
        let optimal_length = cols[8].trim().parse::<f64>().map_err(|_| WorldError::Scenario {
            row,
            reason: format!("bad optimal length {:?}", cols[8]),
        })?;
        entries.push(ScenarioEntry {
            bucket,
            map_name: cols[1].trim().to_string(),
            map_width,
            map_height,
            start: Vertex::new(sy, sx),
            goal: Vertex::new(gy, gx),
            optimal_length,
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_free_map() {
        let map = parse_map("type octile\nheight 3\nwidth 3\nmap\n...\n...\n...\n").unwrap();
        assert_eq!((map.width(), map.height()), (3, 3));
        assert_eq!(map.passable_count(), 9);
        assert_eq!(map.blocked_count(), 0);
    }

    #[test]
    fn one_obstacle() {
        let map = parse_map("type octile\nheight 2\nwidth 2\nmap\n.@\n..\n").unwrap();
        assert_eq!(map.passable_count(), 3);
        assert_eq!(map.blocked_count(), 1);
        assert!(map.is_blocked(Vertex::new(0, 1)));
    }

    #[test]
    fn tree_and_swamp_cells() {
        let map = parse_map("type octile\nheight 1\nwidth 4\nmap\nTSGO\n").unwrap();
        assert!(map.is_blocked(Vertex::new(0, 0)));
        assert!(map.is_passable(Vertex::new(0, 1)));
        assert!(map.is_passable(Vertex::new(0, 2)));
        assert!(map.is_blocked(Vertex::new(0, 3)));
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_map("type octile\nheight 2\nwidth 3\nmap\n...\n..\n").unwrap_err();
        assert_eq!(e, WorldError::Parse { line: 6, reason: "row has 2 cells, expected 3".into() });

        let e = parse_map("type octile\nheight 1\nwidth 2\nmap\n.x\n").unwrap_err();
        assert!(matches!(e, WorldError::Parse { line: 5, .. }));

        let e = parse_map("type octile\nheigth 1\nwidth 2\nmap\n..\n").unwrap_err();
        assert!(matches!(e, WorldError::Parse { line: 2, .. }));

        assert!(parse_map("height 1\nwidth 1\nmap\n.\n").is_err());
        assert!(parse_map("type octile\nheight 2\nwidth 1\nmap\n.\n").is_err());
    }

    #[test]
    fn round_trip() {
        let text = "type octile\nheight 2\nwidth 3\nmap\n.@.\n@..\n";
        let map = parse_map(text).unwrap();
        assert_eq!(serialize_map(&map), text);
    }

    #[test]
    fn scenario_rows_in_order() {
        let text = "version 1\n\
            0\tm.map\t8\t8\t1\t2\t3\t4\t4.0\n\
            0\tm.map\t8\t8\t0\t0\t7\t7\t14\n\
            1\tm.map\t8\t8\t5\t5\t5\t6\t1\n\
            1\tm.map\t8\t8\t2\t1\t1\t2\t2\n";
        let entries = parse_scenario(text).unwrap();
        assert_eq!(entries.len(), 4);
        assert_eq!(entries[0].start, Vertex::new(2, 1));
        assert_eq!(entries[0].goal, Vertex::new(4, 3));
        assert_eq!(entries[3].start, Vertex::new(1, 2));
        assert_eq!(entries[1].optimal_length, 14.0);
    }

    #[test]
    fn empty_scenario() {
        assert!(parse_scenario("version 1\n").unwrap().is_empty());
    }

    #[test]
    fn scenario_column_mismatch() {
        let e = parse_scenario("version 1\n0\tm.map\t8\t8\t1\t2\n").unwrap_err();
        assert!(matches!(e, WorldError::Scenario { row: 2, .. }));
    }
}
