// Last-write-wins guard for in-flight queries: responses arriving after a
// newer request has already rendered are discarded.

export class LatestGate {
  private issued = 0;
  private rendered = 0;

  issue(): number {
    return ++this.issued;
  }

  accept(ticket: number): boolean {
    if (ticket <= this.rendered) {
      return false;
    }
    this.rendered = ticket;
    return true;
  }
}
