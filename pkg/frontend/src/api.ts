import type {
  CroissantDocument,
  EditorSchema,
  InferResponse,
  PreviewResponse,
  ValidationReport,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
    public body?: unknown,
  ) {
    super(message);
  }
}

/** Thin client for the serve API; all rule knowledge stays server-side. */
export class ApiClient {
  constructor(
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private baseUrl = "",
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json().catch(() => undefined);
    if (!response.ok) {
      throw new ApiError(`${path} failed (${response.status})`, response.status, body);
    }
    return body as T;
  }

  schema(): Promise<EditorSchema> {
    return this.json<EditorSchema>("/api/schema");
  }

  validate(document: CroissantDocument): Promise<ValidationReport> {
    return this.json<ValidationReport>("/api/validate", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(document),
    });
  }

  async canonicalize(document: CroissantDocument): Promise<Uint8Array> {
    const response = await this.fetchImpl(this.baseUrl + "/api/canonicalize", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(document),
    });
    if (!response.ok) {
      throw new ApiError(`canonicalize failed (${response.status})`, response.status);
    }
    return new Uint8Array(await response.arrayBuffer());
  }

  infer(filename: string, data: ArrayBuffer | Uint8Array): Promise<InferResponse> {
    const params = new URLSearchParams({ filename });
    return this.json<InferResponse>(`/api/infer?${params}`, {
      method: "POST",
      headers: { "content-type": "application/octet-stream" },
      body: data as BodyInit,
    });
  }

  preview(
    document: CroissantDocument,
    recordSet: string,
    limit: number,
  ): Promise<PreviewResponse> {
    return this.json<PreviewResponse>("/api/records/preview", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ document, recordSet, limit }),
    });
  }
}
