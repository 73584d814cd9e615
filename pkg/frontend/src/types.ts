// Wire types for the housebot service (REST + WebSocket push).

export type TaskRow = [number, string, string, string, string, string];
export type SmsRow = [string, string, string, string, string];

export interface PendingOption {
  number: number;
  label: string;
  default: boolean;
}

export interface PendingCard {
  message_id: number;
  info: string;
  options: PendingOption[];
  sent_at: string;
  deadline: string;
  remaining_s: number;
  window_s: number;
}

export interface PersonRow {
  id: number;
  name: string;
  face_tag: string;
  photo_ref: string;
  telephone: string;
  mobile: string;
}

export interface MapPayload {
  width: number;
  height: number;
  cell_size: number;
  rows: string[];
  locations: Record<string, [number, number]>;
  robot: [number, number];
  path: [number, number][];
}

export interface CameraTile {
  id: string;
  room: string;
}

export interface TaskKind {
  kind: string;
  name: string;
}

export interface ServerState {
  seq?: number;
  now: string;
  task_kinds: TaskKind[];
  tasks: TaskRow[];
  sms_log: SmsRow[];
  pending: PendingCard[];
  people: PersonRow[];
  prefs: Record<string, boolean>;
  emergency_kinds: string[];
  map: MapPayload;
  view: CameraTile[];
}

export interface NewTaskPayload {
  kind: string;
  scheduled_at: string;
  priority: string;
}

export interface NewPersonPayload {
  name: string;
  face_tag: string;
  photo_ref?: string;
  telephone?: string;
  mobile?: string;
}
