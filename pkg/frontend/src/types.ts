/** API payload shapes, mirroring the server's committed JSON Schemas. */

export interface RepoEntry {
  owner: string;
  name: string;
  snapshot_time: string;
}

export interface ColorSegment {
  color: string;
  label_name: string;
}

export interface TooltipPayload {
  title: string;
  created_at: string;
  closed_at: string | null;
  labels: string[];
}

export interface TimelineBar {
  issue_number: number;
  title: string;
  start: string;
  end: string;
  ongoing: boolean;
  duration_days: number;
  segments: ColorSegment[];
  tooltip: TooltipPayload;
}

export interface LegendEntry {
  name: string;
  color: string;
}

export interface TimelinePayload {
  mode: 'status' | 'labels';
  bars: TimelineBar[];
  legend: LegendEntry[];
}

export interface GraphNode {
  id: string;
  kind: 'issue' | 'user' | 'commit' | 'file';
  display: string;
  color: string;
  roles: string[];
  x: number;
  y: number;
}

export interface GraphEdge {
  source: string;
  target: string;
  kind: string;
  bug_fix: boolean;
}

export interface GraphPayload {
  nodes: GraphNode[];
  edges: GraphEdge[];
  meta: { seed: number; iterations: number };
}

export interface DonutWedge {
  name: string;
  value: number;
  start_angle: number;
  end_angle: number;
  color: string;
}

export interface SummaryPayload {
  wedges: DonutWedge[];
  total: number;
}

export interface HistogramBin {
  lower: number;
  upper: number;
  token: string;
  file_count: number;
}
