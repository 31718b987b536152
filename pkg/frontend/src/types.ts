export interface ValidationIssue {
  code: string;
  severity: "error" | "warning" | "info";
  path: string;
  message: string;
}

export interface ValidationReport {
  passed: boolean;
  counts: { error: number; warning: number; info: number };
  issues: ValidationIssue[];
}

export interface SchemaAttribute {
  key: string;
  label: string;
  kind: "text" | "multiline" | "list" | "date" | "boolean";
  level: "required" | "recommended" | "optional";
}

export interface RaiAttribute {
  key: string;
  label: string;
  useCase: string;
}

export interface EditorSchema {
  conformsTo: string;
  required: string[];
  recommended: string[];
  datasetAttributes: SchemaAttribute[];
  raiAttributes: RaiAttribute[];
}

export interface InferResponse {
  suggestedName: string;
  document: CroissantDocument;
  distribution: unknown;
  recordSet: unknown;
}

export interface PreviewResponse {
  records: Record<string, unknown>[];
  warnings: string[];
}

// a croissant document is edited as plain JSON
export type CroissantDocument = Record<string, unknown>;
