import type { ApiClient } from "./api.js";
import type {
  CroissantDocument,
  ValidationIssue,
  ValidationReport,
} from "./types.js";

/** dataset-form attribute key -> document surface key */
export function documentKey(attribute: string): string {
  return attribute === "conformsTo" ? "dct:conformsTo" : attribute;
}

export function asList<T>(value: T | T[] | undefined | null): T[] {
  if (value === undefined || value === null) return [];
  return Array.isArray(value) ? value : [value];
}

export type Listener = () => void;

/**
 * The working document plus validation state.
 *
 * Edits bump a revision; debounced validation requests carry the revision
 * they were issued for, and stale responses (an older revision than the one
 * already applied) are dropped.
 */
export class EditorStore {
  doc: CroissantDocument | null = null;
  dirty = false;
  lastReport: ValidationReport | null = null;
  previewRows: Record<string, unknown>[] = [];
  previewWarnings: string[] = [];

  revision = 0; // bumped on every edit
  reportRevision = -1; // revision the lastReport corresponds to

  private timer: ReturnType<typeof setTimeout> | null = null;
  private listeners: Listener[] = [];

  constructor(
    private api: ApiClient,
    private debounceMs = 300,
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** A report is stale when edits happened after it was computed. */
  get reportIsStale(): boolean {
    return this.reportRevision !== this.revision;
  }

  loadDocument(doc: CroissantDocument): void {
    this.doc = doc;
    this.dirty = false;
    this.previewRows = [];
    this.previewWarnings = [];
    this.revision += 1;
    this.scheduleValidate();
    this.notify();
  }

  getMetadata(attribute: string): unknown {
    if (!this.doc) return undefined;
    return this.doc[documentKey(attribute)];
  }

  setMetadata(attribute: string, value: unknown): void {
    if (!this.doc) this.doc = { "@type": "sc:Dataset" };
    const key = documentKey(attribute);
    const empty =
      value === undefined ||
      value === null ||
      value === "" ||
      (Array.isArray(value) && value.length === 0);
    if (empty) {
      delete this.doc[key];
    } else {
      this.doc[key] = value;
    }
    this.dirty = true;
    this.revision += 1;
    this.scheduleValidate();
    this.notify();
  }

  /** Merge an inferred skeleton into the working document. */
  mergeInferred(fragment: CroissantDocument): void {
    if (!this.doc) {
      this.doc = fragment;
    } else {
      const distribution = [
        ...asList(this.doc["distribution"]),
        ...asList(fragment["distribution"]),
      ];
      const recordSets = [
        ...asList(this.doc["recordSet"]),
        ...asList(fragment["recordSet"]),
      ];
      if (distribution.length) this.doc["distribution"] = distribution;
      if (recordSets.length) this.doc["recordSet"] = recordSets;
    }
    this.dirty = true;
    this.revision += 1;
    this.scheduleValidate();
    this.notify();
  }

  scheduleValidate(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.validateNow();
    }, this.debounceMs);
  }

  async validateNow(): Promise<void> {
    if (!this.doc) return;
    const requested = this.revision;
    let report: ValidationReport;
    try {
      report = await this.api.validate(this.doc);
    } catch {
      return; // network failure: banner handled by the app shell, edits kept
    }
    if (requested <= this.reportRevision) return; // stale response, drop
    this.lastReport = report;
    this.reportRevision = requested;
    this.notify();
  }

  /** First issue anchored at a dataset attribute, for inline form markers. */
  issueFor(attribute: string): ValidationIssue | undefined {
    if (!this.lastReport) return undefined;
    const path = `dataset.${attribute}`;
    return this.lastReport.issues.find((issue) => issue.path === path);
  }

  recordSetIds(): string[] {
    if (!this.doc) return [];
    return asList(this.doc["recordSet"])
      .map((rs) => (rs && typeof rs === "object" ? (rs as any)["@id"] : null))
      .filter((id): id is string => typeof id === "string");
  }

  async loadPreview(recordSet: string, limit = 10): Promise<void> {
    if (!this.doc) return;
    const response = await this.api.preview(this.doc, recordSet, limit);
    this.previewRows = response.records;
    this.previewWarnings = response.warnings;
    this.notify();
  }

  /**
   * Canonical bytes of the current document, produced server-side so the
   * export is byte-identical to the CLI's canonical form.
   */
  async exportCanonical(): Promise<Uint8Array> {
    if (!this.doc) throw new Error("nothing to export");
    return this.api.canonicalize(this.doc);
  }

  /** Export should prompt when the last report still shows errors. */
  get exportNeedsConfirmation(): boolean {
    return this.lastReport !== null && !this.lastReport.passed;
  }
}

/** Render rule for byte-valued cells: a size badge, never raw bytes. */
export function cellText(value: unknown): string {
  if (value === null || value === undefined) return "null";
  if (typeof value === "object" && value !== null && "$bytes" in (value as any)) {
    const b64 = String((value as any)["$bytes"]);
    const padding = b64.endsWith("==") ? 2 : b64.endsWith("=") ? 1 : 0;
    const size = Math.floor((b64.length * 3) / 4) - padding;
    return `bytes(${size})`;
  }
  if (typeof value === "object") return JSON.stringify(value);
  return String(value);
}
