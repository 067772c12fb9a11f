use std::fmt::Display;

/// Line-oriented `key = value` report.
pub struct Report {
    lines: Vec<String>,
    verdict: Option<bool>,
}

impl Report {
    pub fn new(verb: &str, convention: &str) -> Self {
        let mut r = Report {
            lines: Vec::new(),
            verdict: None,
        };
        r.put("tool", format!("flatcone {}", env!("CARGO_PKG_VERSION")));
        r.put("verb", verb);
        r.put("convention", convention);
        r
    }

    pub fn put(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key} = {value}"));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.put(key, format!("{value:.12e}"));
    }

    pub fn list<I: IntoIterator<Item = D>, D: Display>(&mut self, key: &str, items: I) {
        let joined: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
        self.put(key, format!("[{}]", joined.join(", ")));
    }

    pub fn verdict(&mut self, pass: bool) {
        self.verdict = Some(pass);
    }

    pub fn passed(&self) -> bool {
        self.verdict.unwrap_or(true)
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        match self.verdict {
            Some(true) => out.push_str("PASS\n"),
            Some(false) => out.push_str("FAIL\n"),
            None => {}
        }
        out
    }
}
