import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def rename_room(room_id):
    # Rooms are read-only in this API.
    url = f'{BASE}/resource/room/{room_id}'
    resp = requests.put(url, headers=HEADERS, json={'type': 'room'})
    return resp.json()
