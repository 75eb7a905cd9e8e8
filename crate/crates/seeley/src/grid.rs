use std::str::FromStr;

/// `start:end:n`, `n` equally spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.end
                } else {
                    self.start + (self.end - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, n] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not of the form start:end:n"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("grid bound `{v}` is not a finite number"))
        };
        let (start, end) = (num(start)?, num(end)?);
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| format!("grid count `{n}` is not a positive integer"))?;
        if n == 0 {
            return Err("grid count must be at least 1".into());
        }
        if start > end {
            return Err(format!("grid start {start} exceeds end {end}"));
        }
        Ok(Self { start, end, n })
    }
}

/// Every combination of one value per axis, the first axis varying slowest.
pub fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, values| {
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect()
    })
}
