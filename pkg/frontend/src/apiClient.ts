/**
 * Typed client for the detection service API. All rendering data comes from
 * these endpoints; no detection math happens client-side.
 */

export interface ParamSchemaEntry {
  name: string;
  group: "system" | "detection" | "postprocess";
  type: "float" | "int" | "intlist" | "enum";
  min?: number;
  max?: number;
  choices?: string[];
  default: unknown;
  label?: string;
}

export interface ParamsSchema {
  parameters: ParamSchemaEntry[];
  groups: string[];
}

export interface DetectResponse {
  runId: string;
  stats: Record<string, number | null>;
  cacheHit: boolean;
  timings: Record<string, number>;
}

export interface PhantomResponse {
  runId: string;
  width: number;
  height: number;
  gtPixels: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message);
  }
}

export type Layer = "measure" | "overlay" | "orientation" | "curvature" | "skeleton";

export const LAYERS: Layer[] = ["measure", "overlay", "orientation",
  "curvature", "skeleton"];

async function parseError(resp: Response): Promise<never> {
  let body: ApiErrorBody;
  try {
    body = (await resp.json()) as ApiErrorBody;
  } catch {
    body = { code: "http_" + resp.status, message: resp.statusText };
  }
  throw new ApiError(resp.status, body);
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = globalThis.fetch?.bind(globalThis),
  ) {}

  async schema(): Promise<ParamsSchema> {
    const resp = await this.fetchFn(this.baseUrl + "/api/params/schema");
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as ParamsSchema;
  }

  /** POST /api/detect with a multipart image file or an imageRef. */
  async detect(params: object, image: Blob | null,
               filename = "upload.png"): Promise<DetectResponse> {
    const form = new FormData();
    if (image) form.append("image", image, filename);
    form.append("params", JSON.stringify(params));
    const resp = await this.fetchFn(this.baseUrl + "/api/detect", {
      method: "POST",
      body: form,
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as DetectResponse;
  }

  async phantom(body: object): Promise<PhantomResponse> {
    const resp = await this.fetchFn(this.baseUrl + "/api/phantom", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as PhantomResponse;
  }

  /** Layer images are plain GETs; toggling layers never re-runs detection. */
  layerUrl(runId: string, layer: Layer): string {
    return `${this.baseUrl}/api/result/${runId}/${layer}`;
  }

  async fetchLayer(runId: string, layer: Layer): Promise<Blob> {
    const resp = await this.fetchFn(this.layerUrl(runId, layer));
    if (!resp.ok) await parseError(resp);
    return await resp.blob();
  }
}
