// Tiny HTML helpers for string-template views.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function h(strings: TemplateStringsArray, ...values: unknown[]): string {
  let out = "";
  strings.forEach((chunk, i) => {
    out += chunk;
    if (i < values.length) {
      const value = values[i];
      if (Array.isArray(value)) {
        out += value.join("");
      } else if (value != null) {
        out += escapeHtml(String(value));
      }
    }
  });
  return out;
}

/** Raw (pre-rendered, trusted) HTML inside an h`` template. */
export function raw(html: string): string[] {
  return [html];
}
