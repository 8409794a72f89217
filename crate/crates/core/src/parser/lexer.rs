use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumKind {
    Integer,
    Fraction,
    Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Number(String, NumKind),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Equals,
    Otimes,
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based character column.
    pub column: usize,
}

/// Splits `text` into tokens. In tensor mode the sequence `(x)` is read as
/// the tensor product sign, like `⊗`.
pub fn tokenize(text: &str, tensor_mode: bool) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        let column = pos + 1;
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        let single = match c {
            '+' => Some(TokenKind::Plus),
            '-' | '−' => Some(TokenKind::Minus),
            '*' | '·' => Some(TokenKind::Star),
            '^' => Some(TokenKind::Caret),
            ')' => Some(TokenKind::RParen),
            '=' => Some(TokenKind::Equals),
            '⊗' => Some(TokenKind::Otimes),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, column });
            pos += 1;
            continue;
        }
        if c == '(' {
            if tensor_mode {
                if let Some(end) = tensor_sign(&chars, pos) {
                    tokens.push(Token { kind: TokenKind::Otimes, column });
                    pos = end;
                    continue;
                }
            }
            tokens.push(Token { kind: TokenKind::LParen, column });
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(pos + 1).is_some_and(char::is_ascii_digit)) {
            let (kind, end) = number(&chars, pos)?;
            tokens.push(Token { kind, column });
            pos = end;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            tokens.push(Token { kind: TokenKind::Ident(chars[start..pos].iter().collect()), column });
            continue;
        }
        return Err(ParseError::syntax(column, format!("unexpected character `{c}`")));
    }
    tokens.push(Token { kind: TokenKind::End, column: chars.len() + 1 });
    Ok(tokens)
}

/// Matches `( x )` with optional inner whitespace; returns the index past `)`.
fn tensor_sign(chars: &[char], open: usize) -> Option<usize> {
    let mut p = open + 1;
    while chars.get(p).is_some_and(|c| c.is_whitespace()) {
        p += 1;
    }
    if chars.get(p) != Some(&'x') {
        return None;
    }
    p += 1;
    while chars.get(p).is_some_and(|c| c.is_whitespace()) {
        p += 1;
    }
    (chars.get(p) == Some(&')')).then_some(p + 1)
}

fn number(chars: &[char], start: usize) -> Result<(TokenKind, usize), ParseError> {
    let digits = |mut p: usize| {
        while p < chars.len() && chars[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    let mut pos = digits(start);
    if chars.get(pos) == Some(&'.') {
        pos = digits(pos + 1);
        let text: String = chars[start..pos].iter().collect();
        return Ok((TokenKind::Number(text, NumKind::Decimal), pos));
    }
    let int_end = pos;
    let mut p = pos;
    while chars.get(p).is_some_and(|c| c.is_whitespace()) {
        p += 1;
    }
    if chars.get(p) == Some(&'/') {
        p += 1;
        while chars.get(p).is_some_and(|c| c.is_whitespace()) {
            p += 1;
        }
        let den_start = p;
        let den_end = digits(p);
        if den_end == den_start {
            return Err(ParseError::syntax(den_start + 1, "expected a denominator after `/`"));
        }
        let num: String = chars[start..int_end].iter().collect();
        let den: String = chars[den_start..den_end].iter().collect();
        return Ok((TokenKind::Number(format!("{num}/{den}"), NumKind::Fraction), den_end));
    }
    Ok((TokenKind::Number(chars[start..int_end].iter().collect(), NumKind::Integer), int_end))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str, tensor: bool) -> Vec<TokenKind> {
        tokenize(text, tensor).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn fractions_and_decimals() {
        use TokenKind::*;
        assert_eq!(
            kinds("1/2j - 0.5", false),
            vec![Number("1/2".into(), NumKind::Fraction), Ident("j".into()), Minus, Number("0.5".into(), NumKind::Decimal), End]
        );
        assert_eq!(kinds("3 / 4", false)[0], Number("3/4".into(), NumKind::Fraction));
    }

    #[test]
    fn tensor_sign_only_in_tensor_mode() {
        use TokenKind::*;
        assert_eq!(kinds("i(x)k", true), vec![Ident("i".into()), Otimes, Ident("k".into()), End]);
        assert_eq!(kinds("i(x)k", false)[1], LParen);
    }

    #[test]
    fn columns_are_one_based() {
        let err = tokenize("x + $", false).unwrap_err();
        assert_eq!(err, ParseError::syntax(5, "unexpected character `$`"));
        assert!(tokenize("1/ + 2", false).is_err());
    }
}
