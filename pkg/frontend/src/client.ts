/**
 * TCP stream client: connects to the simulator, splits the byte stream
 * into newline-delimited messages, forwards parsed frames and errors,
 * and reconnects with exponential backoff. The client owns nothing but
 * the socket; all interpretation happens in protocol.ts/viewModel.ts.
 */
import * as net from "node:net";

import { type Command, encodeCommand, parseMessage, type StreamMessage } from "./protocol.js";

export interface ClientEvents {
  onMessage: (message: StreamMessage) => void;
  onConnect?: () => void;
  onDisconnect?: () => void;
}

const BACKOFF_INITIAL_MS = 250;
const BACKOFF_MAX_MS = 4000;

export class DashboardClient {
  private socket: net.Socket | null = null;
  private buffer = "";
  private backoffMs = BACKOFF_INITIAL_MS;
  private closed = false;
  private reconnectTimer: NodeJS.Timeout | null = null;

  constructor(
    private readonly host: string,
    private readonly port: number,
    private readonly events: ClientEvents,
    private readonly reconnect: boolean = true,
  ) {}

  connect(): void {
    if (this.closed) return;
    const socket = net.createConnection({ host: this.host, port: this.port });
    this.socket = socket;
    socket.setEncoding("utf8");
    socket.on("connect", () => {
      this.backoffMs = BACKOFF_INITIAL_MS;
      this.events.onConnect?.();
    });
    socket.on("data", (chunk: string) => {
      this.buffer += chunk;
      let index: number;
      while ((index = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, index).trim();
        this.buffer = this.buffer.slice(index + 1);
        if (line.length > 0) {
          this.events.onMessage(parseMessage(line));
        }
      }
    });
    const onGone = () => {
      if (this.socket !== socket) return;
      this.socket = null;
      this.events.onDisconnect?.();
      this.scheduleReconnect();
    };
    socket.on("error", () => socket.destroy());
    socket.on("close", onGone);
  }

  private scheduleReconnect(): void {
    if (this.closed || !this.reconnect) return;
    this.reconnectTimer = setTimeout(() => this.connect(), this.backoffMs);
    this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
  }

  /** Send a schema-validated command; drops silently while disconnected. */
  send(command: Command): boolean {
    if (this.socket === null || this.socket.destroyed) return false;
    this.socket.write(encodeCommand(command));
    return true;
  }

  close(): void {
    this.closed = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.socket?.destroy();
    this.socket = null;
  }
}
