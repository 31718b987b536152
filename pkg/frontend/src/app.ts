import { ApiClient, ApiError } from "./api.js";
import {
  renderIssueMarkers,
  renderMetadataForm,
  renderPreviewTable,
  renderRaiForm,
  renderStatus,
} from "./render.js";
import { EditorStore } from "./state.js";
import type { EditorSchema } from "./types.js";

const api = new ApiClient();
const store = new EditorStore(api);

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function banner(message: string, kind: "error" | "info" = "error"): void {
  const node = byId<HTMLElement>("banner");
  node.textContent = message;
  node.className = `banner ${kind}`;
  if (message) setTimeout(() => (node.className = "banner hidden"), 6000);
}

function download(bytes: Uint8Array, filename: string): void {
  const blob = new Blob([bytes as BlobPart], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

async function main(): Promise<void> {
  let schema: EditorSchema;
  try {
    schema = await api.schema();
  } catch {
    banner("cannot reach the croissant-forge server; is `croissant-forge serve` running?");
    return;
  }

  const metadataForm = byId<HTMLElement>("metadata-form");
  const raiForm = byId<HTMLElement>("rai-form");
  const previewBox = byId<HTMLElement>("preview-box");
  const recordSetPicker = byId<HTMLSelectElement>("record-set");

  const renderForms = () => {
    renderMetadataForm(store, schema, metadataForm);
    renderRaiForm(store, schema.raiAttributes, raiForm);
  };
  renderForms();

  store.subscribe(() => {
    renderIssueMarkers(store, document.body);
    renderStatus(store, byId("status-badge"));
    renderPreviewTable(store, previewBox);
    const ids = store.recordSetIds();
    if (recordSetPicker.options.length !== ids.length) {
      recordSetPicker.replaceChildren(
        ...ids.map((id) => new Option(id, id)),
      );
    }
  });

  byId<HTMLInputElement>("open-file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      store.loadDocument(JSON.parse(await file.text()));
      renderForms();
      await store.validateNow();
    } catch (err) {
      banner(`cannot load ${file.name}: ${err}`);
    }
    input.value = "";
  });

  byId<HTMLInputElement>("upload-file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const inferred = await api.infer(file.name, await file.arrayBuffer());
      store.mergeInferred(inferred.document);
      renderForms();
      banner(`inferred structure from ${file.name}`, "info");
    } catch (err) {
      if (err instanceof ApiError && err.status === 415) {
        banner(`unsupported upload type: ${file.name}`);
      } else {
        banner(`inference failed: ${err}`);
      }
    }
    input.value = "";
  });

  byId<HTMLButtonElement>("preview-btn").addEventListener("click", async () => {
    const recordSet = recordSetPicker.value;
    if (!recordSet) {
      banner("no record set to preview", "info");
      return;
    }
    try {
      await store.loadPreview(recordSet, 10);
    } catch (err) {
      banner(`preview failed: ${err}`);
    }
  });

  byId<HTMLButtonElement>("export-btn").addEventListener("click", async () => {
    if (!store.doc) {
      banner("nothing to export", "info");
      return;
    }
    if (store.exportNeedsConfirmation) {
      const go = window.confirm(
        "the document still has validation errors; export anyway?",
      );
      if (!go) return;
    }
    try {
      const bytes = await store.exportCanonical();
      const name = String(store.getMetadata("name") ?? "croissant");
      download(bytes, `${name}.json`);
    } catch (err) {
      banner(`export failed: ${err}`);
    }
  });

  byId<HTMLButtonElement>("new-btn").addEventListener("click", () => {
    store.loadDocument({
      "@type": "sc:Dataset",
      "dct:conformsTo": schema.conformsTo,
    });
    renderForms();
  });

  for (const tab of document.querySelectorAll<HTMLElement>(".tab")) {
    tab.addEventListener("click", () => {
      for (const other of document.querySelectorAll<HTMLElement>(".tab")) {
        other.classList.toggle("active", other === tab);
      }
      for (const panel of document.querySelectorAll<HTMLElement>(".panel")) {
        panel.classList.toggle("hidden", panel.id !== tab.dataset.panel);
      }
    });
  }
}

void main();
