import type { EditorStore } from "./state.js";
import { asList, cellText } from "./state.js";
import type { EditorSchema, RaiAttribute, SchemaAttribute } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function listToText(value: unknown): string {
  return asList(value)
    .map((v) => (typeof v === "object" && v !== null ? ((v as any).name ?? "") : String(v)))
    .join("\n");
}

function attributeInput(
  store: EditorStore,
  attribute: SchemaAttribute,
): HTMLElement {
  const wrap = el("div", "field-row");
  wrap.dataset.attribute = attribute.key;
  const label = el("label", undefined, attribute.label);
  if (attribute.level === "required") label.append(el("span", "req", " *"));
  wrap.append(label);

  const current = store.getMetadata(attribute.key);
  let input: HTMLInputElement | HTMLTextAreaElement;
  if (attribute.kind === "multiline" || attribute.kind === "list") {
    input = el("textarea");
    input.rows = attribute.kind === "list" ? 2 : 3;
    input.value = attribute.kind === "list" ? listToText(current) : String(current ?? "");
    if (attribute.kind === "list") {
      input.placeholder = "one per line";
    }
  } else if (attribute.kind === "boolean") {
    input = el("input");
    input.type = "checkbox";
    (input as HTMLInputElement).checked = current === true;
  } else {
    input = el("input");
    input.type = attribute.kind === "date" ? "date" : "text";
    input.value = current === undefined || current === null ? "" : String(current);
  }
  input.addEventListener("input", () => {
    if (attribute.kind === "boolean") {
      store.setMetadata(attribute.key, (input as HTMLInputElement).checked || undefined);
    } else if (attribute.kind === "list") {
      const items = input.value.split("\n").map((s) => s.trim()).filter(Boolean);
      store.setMetadata(attribute.key, items);
    } else {
      store.setMetadata(attribute.key, input.value);
    }
  });
  wrap.append(input);
  wrap.append(el("div", "issue-marker"));
  return wrap;
}

export function renderMetadataForm(
  store: EditorStore,
  schema: EditorSchema,
  container: HTMLElement,
): void {
  container.replaceChildren();
  for (const attribute of schema.datasetAttributes) {
    container.append(attributeInput(store, attribute));
  }
}

export function renderRaiForm(
  store: EditorStore,
  attributes: RaiAttribute[],
  container: HTMLElement,
): void {
  container.replaceChildren();
  for (const rai of attributes) {
    const wrap = el("div", "field-row");
    wrap.dataset.attribute = rai.key;
    const label = el("label", undefined, rai.label);
    label.append(el("span", "usecase", ` (${rai.useCase})`));
    const input = el("textarea");
    input.rows = 2;
    input.value = String(store.getMetadata(rai.key) ?? "");
    input.addEventListener("input", () => store.setMetadata(rai.key, input.value));
    wrap.append(label, input, el("div", "issue-marker"));
    container.append(wrap);
  }
}

/** Refresh the inline issue markers from the last validation report. */
export function renderIssueMarkers(store: EditorStore, root: HTMLElement): void {
  for (const row of root.querySelectorAll<HTMLElement>(".field-row")) {
    const marker = row.querySelector<HTMLElement>(".issue-marker");
    if (!marker) continue;
    const attribute = row.dataset.attribute ?? "";
    const issue = store.issueFor(attribute);
    marker.textContent = issue ? `${issue.code}: ${issue.message}` : "";
    marker.className = "issue-marker" + (issue ? ` ${issue.severity}` : "");
    row.classList.toggle("has-error", issue?.severity === "error");
  }
}

export function renderStatus(store: EditorStore, badge: HTMLElement): void {
  if (!store.lastReport) {
    badge.textContent = "not validated yet";
    badge.className = "status";
    return;
  }
  const { counts } = store.lastReport;
  const stale = store.reportIsStale ? " (stale)" : "";
  if (store.lastReport.passed) {
    badge.textContent = `valid, ${counts.warning} warning(s)${stale}`;
    badge.className = "status ok" + (store.reportIsStale ? " stale" : "");
  } else {
    badge.textContent = `${counts.error} error(s), ${counts.warning} warning(s)${stale}`;
    badge.className = "status bad" + (store.reportIsStale ? " stale" : "");
  }
}

export function renderPreviewTable(store: EditorStore, container: HTMLElement): void {
  container.replaceChildren();
  if (store.previewRows.length === 0) {
    container.append(el("p", "zero-state", "no records to show"));
    return;
  }
  const table = el("table", "preview");
  const columns = Object.keys(store.previewRows[0]);
  const head = el("tr");
  for (const column of columns) head.append(el("th", undefined, column));
  table.append(head);
  for (const row of store.previewRows) {
    const tr = el("tr");
    for (const column of columns) {
      const value = row[column];
      const td = el("td");
      if (value !== null && typeof value === "object" && "$bytes" in (value as any)) {
        td.append(el("span", "bytes-badge", cellText(value)));
      } else {
        td.textContent = cellText(value);
      }
      tr.append(td);
    }
    table.append(tr);
  }
  container.append(table);
  if (store.previewWarnings.length) {
    container.append(
      el("p", "warnings", `${store.previewWarnings.length} warning(s) during preview`),
    );
  }
}
