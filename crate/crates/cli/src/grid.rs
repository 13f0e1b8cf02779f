//! Parameter-axis parsing: a single value, a comma list, or a
//! `start:stop:count` range (inclusive, linearly spaced).

pub fn parse_axis(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("empty axis specification".into());
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range must be start:stop:count, got '{spec}'"));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| format!("bad range start '{}'", parts[0]))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| format!("bad range stop '{}'", parts[1]))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad range count '{}'", parts[2]))?;
        if count == 0 {
            return Err("range count must be positive".into());
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad axis value '{tok}'"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::parse_axis;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_axis("2.5").unwrap(), vec![2.5]);
        assert_eq!(parse_axis("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        let r = parse_axis("0:1:5").unwrap();
        assert_eq!(r, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_axis("2:9:1").unwrap(), vec![2.0]);
        assert!(parse_axis("").is_err());
        assert!(parse_axis("1:2").is_err());
        assert!(parse_axis("a,b").is_err());
    }
}
