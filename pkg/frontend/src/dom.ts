/** Small DOM/SVG builders; no framework, views render into a container. */

const SVG_NS = 'http://www.w3.org/2000/svg';

export function html<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Singleton floating tooltip; views move and fill it on hover. */
export function ensureTooltip(): HTMLDivElement {
  let tip = document.querySelector<HTMLDivElement>('.tooltip');
  if (!tip) {
    tip = html('div', { class: 'tooltip', style: 'display:none' });
    document.body.appendChild(tip);
  }
  return tip;
}

export function showTooltip(lines: string[], x: number, y: number): void {
  const tip = ensureTooltip();
  clear(tip);
  for (const line of lines) tip.appendChild(html('div', {}, line));
  tip.style.display = 'block';
  tip.style.left = `${x + 12}px`;
  tip.style.top = `${y + 12}px`;
}

export function hideTooltip(): void {
  ensureTooltip().style.display = 'none';
}
