// String-level HTML helpers: components render to markup text, so tests
// can check structure and escaping without a browser.

export function escapeHtml(value: unknown): string {
  return String(value ?? "")
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const VOID_ELEMENTS = new Set([
  "br", "hr", "img", "input", "meta", "link", "col", "wbr",
]);

const TAG_PATTERN =
  /^<(\/)?([a-zA-Z][a-zA-Z0-9-]*)((?:\s+[a-zA-Z-]+(?:="[^"<>]*")?)*)\s*(\/)?>/;

const ENTITY_PATTERN = /^&(#\d+|#x[0-9a-fA-F]+|[a-zA-Z][a-zA-Z0-9]*);/;

/** Local well-formedness check; an empty list means the fragment passes. */
export function validateMarkup(text: string): string[] {
  const problems: string[] = [];
  const stack: string[] = [];
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (ch === "<") {
      const match = TAG_PATTERN.exec(text.slice(i));
      if (!match) {
        problems.push(`unescaped '<' at offset ${i}`);
        i += 1;
        continue;
      }
      const [raw, closing, name, , selfClosing] = match;
      const tag = name.toLowerCase();
      if (closing) {
        if (stack.length === 0) {
          problems.push(`unexpected closing </${tag}>`);
        } else if (stack[stack.length - 1] !== tag) {
          problems.push(`misnested </${tag}>, expected </${stack[stack.length - 1]}>`);
          stack.pop();
        } else {
          stack.pop();
        }
      } else if (!selfClosing && !VOID_ELEMENTS.has(tag)) {
        stack.push(tag);
      }
      i += raw.length;
    } else if (ch === "&") {
      if (!ENTITY_PATTERN.test(text.slice(i))) {
        problems.push(`bare '&' at offset ${i}`);
      }
      i += 1;
    } else if (ch === ">") {
      problems.push(`stray '>' at offset ${i}`);
      i += 1;
    } else {
      i += 1;
    }
  }
  for (const tag of stack) {
    problems.push(`unclosed <${tag}>`);
  }
  return problems;
}
